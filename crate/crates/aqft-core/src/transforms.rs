//! Reference transform matrices built straight from their defining
//! summations, and phase-deviation analysis of the approximate transform.
//!
//! These are the oracles the circuit module is checked against. Every entry
//! phase is accumulated as an exact integer before it ever touches floating
//! point, so endpoint identities hold to the last bit.
//!
//! Matrices are indexed `(row c, column a)` with `c` the frequency index; the
//! bit-reversal bridge to circuit output order lives in [`crate::circuit`].

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::Error;
use crate::matrix::Matrix;
use crate::Result;

/// Dense reference builders are verification oracles; widths beyond this are
/// refused.
pub const DENSE_WIDTH_MAX: usize = 10;

/// A dense `2^L × 2^L` transform matrix, row index `c` (frequency), column
/// index `a` (time), tagged with the `(L, m)` that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformMatrix {
    width_l: usize,
    approx_m: usize,
    entries: Matrix,
}

impl TransformMatrix {
    pub fn width_l(&self) -> usize {
        self.width_l
    }

    pub fn approx_m(&self) -> usize {
        self.approx_m
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    /// Entry at frequency row `c`, time column `a`.
    pub fn entry(&self, c: usize, a: usize) -> Complex64 {
        self.entries.get(c, a)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    /// Text export: a header line `l=<L> m=<m> row=c col=a`, then one row per
    /// line as `re im` pairs with 17 significant digits.
    pub fn to_text(&self) -> String {
        let dim = self.dim();
        let mut out = format!("l={} m={} row=c col=a\n", self.width_l, self.approx_m);
        for c in 0..dim {
            let mut row = Vec::with_capacity(dim);
            for a in 0..dim {
                let v = self.entry(c, a);
                row.push(format!("{:.16e} {:.16e}", v.re, v.im));
            }
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// JSON export with the same header fields and row-major `[re, im]`
    /// pairs. serde_json prints floats in shortest round-trip form, which
    /// preserves all 17 significant digits.
    pub fn to_json(&self) -> String {
        let dim = self.dim();
        let rows: Vec<Vec<[f64; 2]>> = (0..dim)
            .map(|c| {
                (0..dim)
                    .map(|a| {
                        let v = self.entry(c, a);
                        [v.re, v.im]
                    })
                    .collect()
            })
            .collect();
        let value = serde_json::json!({
            "l": self.width_l,
            "m": self.approx_m,
            "convention": "row=c, col=a",
            "entries": rows,
        });
        value.to_string()
    }

    /// CSV export: `c,a,re,im` per entry with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let dim = self.dim();
        let mut out = String::from("c,a,re,im\n");
        for c in 0..dim {
            for a in 0..dim {
                let v = self.entry(c, a);
                out.push_str(&format!("{c},{a},{:.16e},{:.16e}\n", v.re, v.im));
            }
        }
        out
    }
}

fn check_width(l: usize) -> Result<()> {
    if !(1..=DENSE_WIDTH_MAX).contains(&l) {
        return Err(Error::DenseWidthExceeded {
            width: l,
            max: DENSE_WIDTH_MAX,
        });
    }
    Ok(())
}

/// `Σ a_j c_k 2^(j+k)` over bit pairs with `lo ≤ j+k ≤ hi`, exact in
/// integers. The phase windows of the exact, approximate, and Hadamard
/// transforms are all instances of this sum.
fn phase_window_sum(a: usize, c: usize, l: usize, lo: usize, hi: usize) -> u64 {
    let mut sum = 0u64;
    for j in 0..l {
        if (a >> j) & 1 == 0 {
            continue;
        }
        for k in 0..l {
            if (c >> k) & 1 == 0 {
                continue;
            }
            let s = j + k;
            if s >= lo && s <= hi {
                sum += 1u64 << s;
            }
        }
    }
    sum
}

/// The exact discrete Fourier transform matrix: entry `(c,a)` is
/// `2^(−L/2) · exp(2πi·ac/2^L)`.
pub fn dft_matrix(l: usize) -> Result<TransformMatrix> {
    check_width(l)?;
    let dim = 1usize << l;
    let scale = (dim as f64).sqrt().recip();
    let modulus = 1u64 << l;
    let mut entries = Matrix::zeros(dim);
    for c in 0..dim {
        for a in 0..dim {
            let e = (a as u64 * c as u64) % modulus;
            entries.set(
                c,
                a,
                Complex64::from_polar(scale, TAU * e as f64 / modulus as f64),
            );
        }
    }
    Ok(TransformMatrix {
        width_l: l,
        approx_m: l,
        entries,
    })
}

/// The reversed-index Hadamard transform matrix: entry `(c,a)` is
/// `2^(−L/2) · (−1)^(Σ_j a_j·c_(L−1−j))`. Entries are exact ±2^(−L/2).
pub fn hadamard_matrix(l: usize) -> Result<TransformMatrix> {
    check_width(l)?;
    let dim = 1usize << l;
    let scale = (dim as f64).sqrt().recip();
    let mut entries = Matrix::zeros(dim);
    for c in 0..dim {
        for a in 0..dim {
            let mut parity = 0usize;
            for j in 0..l {
                parity += ((a >> j) & 1) * ((c >> (l - 1 - j)) & 1);
            }
            let sign = if parity.is_multiple_of(2) {
                scale
            } else {
                -scale
            };
            entries.set(c, a, Complex64::new(sign, 0.0));
        }
    }
    Ok(TransformMatrix {
        width_l: l,
        approx_m: 1,
        entries,
    })
}

/// The approximate transform matrix: only phase terms with
/// `L−m ≤ j+k ≤ L−1` are kept, so every entry phase is a multiple of
/// `2π/2^m`. `m = L` reproduces [`dft_matrix`]; `m = 1` reproduces
/// [`hadamard_matrix`] up to one rounding of `exp(iπ)`.
pub fn afft_matrix(l: usize, m: usize) -> Result<TransformMatrix> {
    check_width(l)?;
    if m < 1 || m > l {
        return Err(Error::ApproxOutOfRange {
            approx_m: m,
            width: l,
        });
    }
    let dim = 1usize << l;
    let scale = (dim as f64).sqrt().recip();
    let modulus = 1u64 << l;
    let mut entries = Matrix::zeros(dim);
    for c in 0..dim {
        for a in 0..dim {
            let e = phase_window_sum(a, c, l, l - m, l - 1) % modulus;
            entries.set(
                c,
                a,
                Complex64::from_polar(scale, TAU * e as f64 / modulus as f64),
            );
        }
    }
    Ok(TransformMatrix {
        width_l: l,
        approx_m: m,
        entries,
    })
}

/// Entrywise phase-deviation statistics of the approximate transform against
/// the exact one, with the closed-form bound `2πL·2^(−m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationReport {
    pub width_l: usize,
    pub approx_m: usize,
    /// Observed maximum |phase difference| over all `(a,c)`; `None` when the
    /// width exceeds the dense guard and only the bound is available.
    pub max_phase_deviation: Option<f64>,
    /// `2πL·2^(−m)` in radians, computed for any width.
    pub analytic_bound: f64,
    /// Whether the observed maximum stayed within the bound; `None` when
    /// nothing was observed.
    pub bound_satisfied: Option<bool>,
}

/// The closed-form deviation bound `2πL·2^(−m)`; no width limit.
pub fn analytic_deviation_bound(l: usize, m: usize) -> f64 {
    TAU * l as f64 * 2f64.powi(-(m as i32))
}

/// Deviation report for `(l, m)`. For `l` within the dense guard the observed
/// maximum is found by exhaustively maximizing the dropped-term sum
/// `(2π/2^l)·Σ_(j+k<l−m) a_j c_k 2^(j+k)` over all index pairs, exact in
/// integers before scaling; beyond the guard only the analytic bound is
/// reported.
pub fn deviation_report(l: usize, m: usize) -> Result<DeviationReport> {
    if l < 1 {
        return Err(Error::WidthOutOfRange {
            width: l,
            min: 1,
            max: usize::MAX,
        });
    }
    if m < 1 || m > l {
        return Err(Error::ApproxOutOfRange {
            approx_m: m,
            width: l,
        });
    }
    let analytic_bound = analytic_deviation_bound(l, m);
    let observed = if l <= DENSE_WIDTH_MAX {
        let dim = 1usize << l;
        let mut worst = 0u64;
        if m < l {
            for a in 0..dim {
                for c in 0..dim {
                    worst = worst.max(phase_window_sum(a, c, l, 0, l - m - 1));
                }
            }
        }
        Some(TAU * worst as f64 / (1u64 << l) as f64)
    } else {
        None
    };
    Ok(DeviationReport {
        width_l: l,
        approx_m: m,
        max_phase_deviation: observed,
        analytic_bound,
        bound_satisfied: observed.map(|d| d <= analytic_bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dft_width_one_is_hadamard_block() {
        let m = dft_matrix(1).unwrap();
        let h = 2f64.sqrt().recip();
        assert!((m.entry(0, 0).re - h).abs() < 1e-15);
        assert!((m.entry(0, 1).re - h).abs() < 1e-15);
        assert!((m.entry(1, 0).re - h).abs() < 1e-15);
        assert!((m.entry(1, 1).re + h).abs() < 1e-15);
    }

    #[test]
    fn dft_width_three_first_harmonic() {
        let m = dft_matrix(3).unwrap();
        let expected = Complex64::from_polar(8f64.sqrt().recip(), TAU / 8.0);
        assert!((m.entry(1, 1) - expected).norm() < 1e-15);
    }

    #[test]
    fn dft_width_two_corner() {
        // ac = 9 ≡ 1 (mod 4), so the entry is i/2.
        let m = dft_matrix(2).unwrap();
        let expected = Complex64::new(0.0, 0.5);
        assert!((m.entry(3, 3) - expected).norm() < 1e-15);
    }

    #[test]
    fn dft_width_guard() {
        assert!(dft_matrix(11).is_err());
        assert!(dft_matrix(0).is_err());
    }

    #[test]
    fn afft_parameter_guards() {
        assert!(afft_matrix(3, 0).is_err());
        assert!(afft_matrix(3, 4).is_err());
        assert!(afft_matrix(11, 2).is_err());
    }

    #[test]
    fn hadamard_width_one() {
        let m = hadamard_matrix(1).unwrap();
        let h = 2f64.sqrt().recip();
        assert_eq!(m.entry(1, 1).re, -h);
        assert_eq!(m.entry(0, 1).re, h);
    }

    #[test]
    fn hadamard_width_two_reversed_pairing() {
        // a=01, c=01: the reversed-index exponent a0·c1 + a1·c0 vanishes.
        let m = hadamard_matrix(2).unwrap();
        assert_eq!(m.entry(1, 1).re, 0.5);
        // a=01, c=10 pairs a0 with c1=1, flipping the sign.
        assert_eq!(m.entry(2, 1).re, -0.5);
    }

    #[test]
    fn hadamard_equals_afft_m_one() {
        for l in 1..=4 {
            let ht = hadamard_matrix(l).unwrap();
            let af = afft_matrix(l, 1).unwrap();
            assert!(ht.matrix().max_abs_diff(af.matrix()) < 1e-15, "width {l}");
        }
    }

    #[test]
    fn afft_endpoint_equals_dft_exactly() {
        for l in 1..=5 {
            let exact = dft_matrix(l).unwrap();
            let approx = afft_matrix(l, l).unwrap();
            assert_eq!(exact.matrix(), approx.matrix(), "width {l}");
        }
    }

    #[test]
    fn afft_corner_entry_width_three() {
        // a = c = 7, m = 2: retained bit pairs (j,k) with 1 ≤ j+k ≤ 2 sum to
        // 2+2+4+4+4 = 16 ≡ 0 (mod 8), so the entry is +1/√8. Cross-checked
        // against the gate-built matrix in the integration suite.
        let m = afft_matrix(3, 2).unwrap();
        let expected = Complex64::new(8f64.sqrt().recip(), 0.0);
        assert!((m.entry(7, 7) - expected).norm() < 1e-15);
    }

    #[test]
    fn afft_phase_quantization() {
        for l in 1..=5 {
            for m in 1..=l {
                let mat = afft_matrix(l, m).unwrap();
                for c in 0..mat.dim() {
                    for a in 0..mat.dim() {
                        let phase = mat.entry(c, a).arg();
                        let steps = phase * (1u64 << m) as f64 / TAU;
                        assert!(
                            (steps - steps.round()).abs() < 1e-9,
                            "l={l} m={m} c={c} a={a}: {steps}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn builders_are_unitary_and_flat() {
        for l in 1..=5 {
            for mat in [
                dft_matrix(l).unwrap(),
                hadamard_matrix(l).unwrap(),
                afft_matrix(l, l.div_ceil(2)).unwrap(),
            ] {
                assert!(mat.matrix().unitarity_defect() < 1e-10, "width {l}");
                let magnitude = (mat.dim() as f64).sqrt().recip();
                for v in mat.matrix().entries() {
                    assert!((v.norm() - magnitude).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn deviation_bound_production_scale() {
        let report = deviation_report(500, 20).unwrap();
        assert_eq!(report.max_phase_deviation, None);
        assert_eq!(report.bound_satisfied, None);
        // 2π·500/2^20 = 2.9960562263391427e-3, about 3/1000.
        assert!((report.analytic_bound - 2.9960562263391427e-3).abs() < 1e-15);
    }

    #[test]
    fn deviation_zero_when_nothing_dropped() {
        for l in 1..=6 {
            let report = deviation_report(l, l).unwrap();
            assert_eq!(report.max_phase_deviation, Some(0.0));
            assert_eq!(report.bound_satisfied, Some(true));
        }
    }

    #[test]
    fn deviation_width_six_m_three() {
        // Dropped window j+k ≤ 2 is maximized by all-ones indices:
        // 1 + 2·2 + 3·4 = 17, so the max deviation is 2π·17/64.
        let report = deviation_report(6, 3).unwrap();
        let expected = 17.0 * PI / 32.0;
        assert!((report.max_phase_deviation.unwrap() - expected).abs() < 1e-12);
        assert_eq!(report.bound_satisfied, Some(true));
    }

    #[test]
    fn deviation_monotone_in_m() {
        for l in 2..=7 {
            let mut last = f64::INFINITY;
            for m in 1..=l {
                let d = deviation_report(l, m).unwrap().max_phase_deviation.unwrap();
                assert!(d <= last, "l={l} m={m}");
                last = d;
            }
        }
    }

    #[test]
    fn dropped_sum_is_independent_of_route() {
        // The dropped window must complement the retained one inside the
        // full product a·c = Σ a_j c_k 2^(j+k).
        for l in 1..=6usize {
            for m in 1..=l {
                for a in 0..(1usize << l) {
                    for c in 0..(1usize << l) {
                        let dropped = if m < l {
                            phase_window_sum(a, c, l, 0, l - m - 1)
                        } else {
                            0
                        };
                        let retained_and_high = phase_window_sum(a, c, l, l - m, 2 * l);
                        assert_eq!(dropped + retained_and_high, a as u64 * c as u64);
                    }
                }
            }
        }
    }

    #[test]
    fn export_text_shape() {
        let text = dft_matrix(1).unwrap().to_text();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("l=1 m=1 row=c col=a"));
        let row: Vec<&str> = lines.next().unwrap().split(' ').collect();
        assert_eq!(row.len(), 4);
        assert!(row[0].parse::<f64>().is_ok());
    }
}
