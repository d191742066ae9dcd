//! Order finding with interleaved qubit preparation, controlled modular
//! multiplication, approximate-transform gates, and early per-qubit
//! measurement, plus the classical post-processing down to a period and a
//! factor pair.
//!
//! The register layout is fixed: qubits `0..L` hold the exponent register
//! `a`, qubits `L..L+w` hold the work register `y` (with `w` just wide
//! enough for the modulus). The work register starts at `y = 1`, is driven
//! only through controlled multiplication, and is never measured.
//!
//! Pass `J` (from `L−1` down to `0`) puts qubit `J` into `(|0⟩+|1⟩)/√2`,
//! multiplies `y` by `x^(2^J)` wherever bit `J` is set, applies the retained
//! phase gates `Q(J,K)` and the Hadamard `P(J)`, and — once `J ≤ L−m` —
//! measures output bit `b(J+m−1)`, which takes part in no later gate. The
//! bits left over after the loop are measured last, and the assembled value
//! is bit-reversed into the frequency estimate.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{bit_reverse_value, build_aqft_plan, GateOp};
use crate::error::Error;
use crate::numerics::{BasisIndex, StateVector, MAX_QUBITS};
use crate::Result;

/// Branches thinner than this are skipped during exhaustive enumeration;
/// the mass lost stays far below every stated tolerance.
const BRANCH_PRUNE_THRESHOLD: f64 = 1e-14;

/// Parameters of one order-finding problem instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderFindingConfig {
    modulus_n: u64,
    base_x: u64,
    width_l: usize,
    approx_m: usize,
    seed: u64,
}

impl OrderFindingConfig {
    /// Validate and build a configuration. Requires `n ≥ 3`,
    /// `1 ≤ x < n` coprime to `n`, `1 ≤ m ≤ L`, and a total register of at
    /// most [`MAX_QUBITS`] qubits.
    pub fn new(
        modulus_n: u64,
        base_x: u64,
        width_l: usize,
        approx_m: usize,
        seed: u64,
    ) -> Result<Self> {
        if modulus_n < 3 {
            return Err(Error::InvalidConfig {
                reason: format!("modulus must be at least 3, got {modulus_n}"),
            });
        }
        if base_x < 1 || base_x >= modulus_n {
            return Err(Error::InvalidConfig {
                reason: format!("base must satisfy 1 <= x < n, got x={base_x} n={modulus_n}"),
            });
        }
        let g = gcd(base_x, modulus_n);
        if g != 1 {
            return Err(Error::NotCoprime {
                base: base_x,
                modulus: modulus_n,
                gcd: g,
            });
        }
        if width_l < 1 {
            return Err(Error::WidthOutOfRange {
                width: width_l,
                min: 1,
                max: MAX_QUBITS,
            });
        }
        if approx_m < 1 || approx_m > width_l {
            return Err(Error::ApproxOutOfRange {
                approx_m,
                width: width_l,
            });
        }
        let total = width_l + work_register_width(modulus_n);
        if total > MAX_QUBITS {
            return Err(Error::QubitBudgetExceeded {
                requested: total,
                max: MAX_QUBITS,
            });
        }
        Ok(OrderFindingConfig {
            modulus_n,
            base_x,
            width_l,
            approx_m,
            seed,
        })
    }

    pub fn modulus_n(&self) -> u64 {
        self.modulus_n
    }

    pub fn base_x(&self) -> u64 {
        self.base_x
    }

    pub fn width_l(&self) -> usize {
        self.width_l
    }

    pub fn approx_m(&self) -> usize {
        self.approx_m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Work-register width: enough qubits to hold values below the modulus.
    pub fn work_qubits(&self) -> usize {
        work_register_width(self.modulus_n)
    }

    pub fn total_qubits(&self) -> usize {
        self.width_l + self.work_qubits()
    }

    /// `q = 2^L`, the size of the exponent register.
    pub fn q(&self) -> u64 {
        1u64 << self.width_l
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Qubits needed to hold values in `[0, n)`.
pub fn work_register_width(n: u64) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

/// Smallest width `L` with `2^L ≥ 5n²`, the preferred register size for a
/// modulus `n`.
pub fn default_width(n: u64) -> usize {
    let target = 5u128 * n as u128 * n as u128;
    let mut l = 0usize;
    while (1u128 << l) < target {
        l += 1;
    }
    l
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mod_mul(a: u64, b: u64, modulus: u64) -> u64 {
    (a as u128 * b as u128 % modulus as u128) as u64
}

/// `base^exp mod modulus` by square-and-multiply.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut result = 1 % modulus;
    let mut base = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mod_mul(result, base, modulus);
        }
        base = mod_mul(base, base, modulus);
        exp >>= 1;
    }
    result
}

/// `x^(2^j) mod n` by `j` repeated squarings — the multiplier a pass `j`
/// applies to the work register.
pub fn modexp_factor(base_x: u64, pass_j: usize, modulus_n: u64) -> Result<u64> {
    let g = gcd(base_x, modulus_n);
    if g != 1 {
        return Err(Error::NotCoprime {
            base: base_x,
            modulus: modulus_n,
            gcd: g,
        });
    }
    let mut value = base_x % modulus_n;
    for _ in 0..pass_j {
        value = mod_mul(value, value, modulus_n);
    }
    Ok(value)
}

/// One measured output bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MeasuredBit {
    /// Pass that produced the bit, `None` for the residual sweep after the
    /// main loop.
    pub pass: Option<usize>,
    /// Position of the bit in the assembled output value `b`; equals the
    /// qubit index it was read from.
    pub bit_index: usize,
    pub value: u8,
}

/// Everything one semiclassical run produces. The work register is traced
/// out, never read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    /// The `L` measured bits in measurement order.
    pub measured_bits: Vec<MeasuredBit>,
    /// Bit-reversal of the assembled measured value: the frequency estimate.
    pub frequency_estimate: u64,
}

/// One step of the rearranged computation.
#[derive(Clone, Copy, Debug)]
enum Step {
    Gate(GateOp),
    ModMultiply { control: usize, multiplier: u64 },
    Measure { qubit: usize, pass: Option<usize> },
}

/// The full step list for a configuration: per pass, qubit preparation,
/// controlled multiplication, retained phase gates, Hadamard, and (once the
/// pass is low enough) the early measurement; then the residual sweep.
fn semiclassical_steps(config: &OrderFindingConfig) -> Result<Vec<Step>> {
    let l = config.width_l;
    let m = config.approx_m;
    let mut steps = Vec::new();
    for j in (0..l).rev() {
        steps.push(Step::Gate(GateOp::hadamard(j)));
        steps.push(Step::ModMultiply {
            control: j,
            multiplier: modexp_factor(config.base_x, j, config.modulus_n)?,
        });
        let k_top = (j + m - 1).min(l - 1);
        for k in (j + 1..=k_top).rev() {
            steps.push(Step::Gate(GateOp::controlled_phase(j, k, l)?));
        }
        steps.push(Step::Gate(GateOp::hadamard(j)));
        if j + m <= l {
            steps.push(Step::Measure {
                qubit: j + m - 1,
                pass: Some(j),
            });
        }
    }
    for bit in (0..m.saturating_sub(1)).rev() {
        steps.push(Step::Measure {
            qubit: bit,
            pass: None,
        });
    }
    Ok(steps)
}

/// `|a = 0⟩ ⊗ |y = 1⟩` on the joint register.
fn initial_state(config: &OrderFindingConfig) -> Result<StateVector> {
    let total = config.total_qubits();
    StateVector::basis_state(total, BasisIndex::new(1usize << config.width_l, total)?)
}

/// Multiply the work register by `multiplier` mod `n` on every basis state
/// whose control bit is set: a permutation of basis indices, unitary because
/// the multiplier is invertible mod `n`. Work values at or above `n` never
/// occur and stay fixed.
fn apply_controlled_modmul(
    sv: &mut StateVector,
    control: usize,
    multiplier: u64,
    modulus: u64,
    a_width: usize,
) -> Result<()> {
    let amps = sv.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    let a_mask = (1usize << a_width) - 1;
    for (index, amp) in amps.iter().enumerate() {
        let dest = if (index >> control) & 1 == 1 {
            let y = (index >> a_width) as u64;
            if y < modulus {
                (index & a_mask) | ((mod_mul(y, multiplier, modulus) as usize) << a_width)
            } else {
                index
            }
        } else {
            index
        };
        out[dest] = *amp;
    }
    *sv = StateVector::from_amplitudes(out)?;
    Ok(())
}

fn assemble_record(measured: Vec<MeasuredBit>, width_l: usize) -> RunRecord {
    let b = measured.iter().fold(0usize, |acc, bit| {
        acc | ((bit.value as usize) << bit.bit_index)
    });
    RunRecord {
        measured_bits: measured,
        frequency_estimate: bit_reverse_value(b, width_l) as u64,
    }
}

fn run_with_rng(config: &OrderFindingConfig, rng: &mut ChaCha8Rng) -> Result<RunRecord> {
    let steps = semiclassical_steps(config)?;
    let mut sv = initial_state(config)?;
    let mut measured = Vec::with_capacity(config.width_l);
    for step in steps {
        match step {
            Step::Gate(gate) => gate.apply(&mut sv)?,
            Step::ModMultiply {
                control,
                multiplier,
            } => apply_controlled_modmul(
                &mut sv,
                control,
                multiplier,
                config.modulus_n,
                config.width_l,
            )?,
            Step::Measure { qubit, pass } => {
                let draw = rng.gen::<f64>();
                let value = sv.measure_qubit(qubit, draw)?;
                measured.push(MeasuredBit {
                    pass,
                    bit_index: qubit,
                    value,
                });
            }
        }
    }
    Ok(assemble_record(measured, config.width_l))
}

/// One semiclassical run; the configuration seed fully determines every
/// measurement draw.
pub fn run_semiclassical(config: &OrderFindingConfig) -> Result<RunRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(0);
    run_with_rng(config, &mut rng)
}

/// A batch of independent runs. Shot `i` uses stream `i` of the seeded
/// generator, so shot 0 reproduces [`run_semiclassical`] and any shot can be
/// replayed in isolation.
pub fn run_shots(config: &OrderFindingConfig, shots: usize) -> Result<Vec<RunRecord>> {
    (0..shots)
        .map(|shot| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(shot as u64);
            run_with_rng(config, &mut rng)
        })
        .collect()
}

/// Exact outcome distribution of the semiclassical computation over
/// frequency estimates, found by forking on both outcomes at every
/// measurement and multiplying branch probabilities along each path.
pub fn enumerate_semiclassical_distribution(config: &OrderFindingConfig) -> Result<Vec<f64>> {
    let steps = semiclassical_steps(config)?;
    let sv = initial_state(config)?;
    let mut dist = vec![0.0; 1usize << config.width_l];
    walk_branches(config, &steps, 0, sv, 1.0, Vec::new(), &mut dist)?;
    Ok(dist)
}

fn walk_branches(
    config: &OrderFindingConfig,
    steps: &[Step],
    from: usize,
    mut sv: StateVector,
    path_probability: f64,
    measured: Vec<MeasuredBit>,
    dist: &mut [f64],
) -> Result<()> {
    let mut position = from;
    while position < steps.len() {
        match steps[position] {
            Step::Gate(gate) => gate.apply(&mut sv)?,
            Step::ModMultiply {
                control,
                multiplier,
            } => apply_controlled_modmul(
                &mut sv,
                control,
                multiplier,
                config.modulus_n,
                config.width_l,
            )?,
            Step::Measure { qubit, pass } => {
                let p_one = sv.qubit_one_probability(qubit)?;
                for outcome in [0u8, 1u8] {
                    let branch = if outcome == 1 { p_one } else { 1.0 - p_one };
                    if branch < BRANCH_PRUNE_THRESHOLD {
                        continue;
                    }
                    let mut branch_sv = sv.clone();
                    branch_sv.collapse_qubit(qubit, outcome)?;
                    let mut branch_measured = measured.clone();
                    branch_measured.push(MeasuredBit {
                        pass,
                        bit_index: qubit,
                        value: outcome,
                    });
                    walk_branches(
                        config,
                        steps,
                        position + 1,
                        branch_sv,
                        path_probability * branch,
                        branch_measured,
                        dist,
                    )?;
                }
                return Ok(());
            }
        }
        position += 1;
    }
    let record = assemble_record(measured, config.width_l);
    dist[record.frequency_estimate as usize] += path_probability;
    Ok(())
}

/// Measurement-free oracle: prepare `(1/√q) Σ_a |a, x^a mod n⟩`, run the
/// width-`L` transform plan on the exponent register, and return the
/// marginal Born distribution over the frequency index `c` (rows
/// un-bit-reversed).
pub fn full_circuit_distribution(config: &OrderFindingConfig) -> Result<Vec<f64>> {
    let l = config.width_l;
    let w = config.work_qubits();
    let q = 1usize << l;
    let scale = (q as f64).sqrt().recip();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << (l + w)];
    let mut y = 1u64;
    for a in 0..q {
        amps[a | ((y as usize) << l)] = Complex64::new(scale, 0.0);
        y = mod_mul(y, config.base_x, config.modulus_n);
    }
    let mut sv = StateVector::from_amplitudes(amps)?;
    let plan = build_aqft_plan(l, config.approx_m)?;
    plan.run(&mut sv)?;
    let probs = sv.born_distribution();
    let mut dist = vec![0.0; q];
    for (c, slot) in dist.iter_mut().enumerate() {
        let b = bit_reverse_value(c, l);
        *slot = (0..1usize << w).map(|y| probs[b | (y << l)]).sum();
    }
    Ok(dist)
}

/// Denominators of the continued-fraction convergents of `c/q`, strictly
/// below `limit`.
fn convergent_denominators(c: u64, q: u64, limit: u64) -> Vec<u64> {
    let mut denominators = Vec::new();
    let (mut num, mut den) = (c, q);
    let (mut k_prev2, mut k_prev1) = (1u64, 0u64);
    while den != 0 {
        let a = num / den;
        let k = a * k_prev1 + k_prev2;
        if k >= limit {
            break;
        }
        denominators.push(k);
        (num, den) = (den, num % den);
        (k_prev2, k_prev1) = (k_prev1, k);
    }
    denominators
}

/// Recover a period from frequency estimates: every continued-fraction
/// convergent of `c/q` with denominator below `n` is a candidate, candidates
/// are verified by `x^r ≡ 1 (mod n)`, and the least verified one wins.
/// `None` when nothing verifies — absence is a value, not an error.
pub fn extract_period(estimates: &[u64], q: u64, modulus_n: u64, base_x: u64) -> Option<u64> {
    let mut best: Option<u64> = None;
    for &c in estimates {
        for d in convergent_denominators(c, q, modulus_n) {
            if d >= 1 && mod_pow(base_x, d, modulus_n) == 1 {
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
    }
    best
}

/// Classical factoring step: for an even period with `x^(r/2) ≢ −1 (mod n)`,
/// both of `gcd(x^(r/2) ∓ 1, n)` are factors when nontrivial.
pub fn factor_from_period(
    modulus_n: u64,
    base_x: u64,
    period_r: u64,
) -> Result<Option<(u64, u64)>> {
    if period_r == 0 || mod_pow(base_x, period_r, modulus_n) != 1 {
        return Err(Error::PeriodPrecondition {
            base: base_x,
            period: period_r,
            modulus: modulus_n,
        });
    }
    if period_r % 2 == 1 {
        return Ok(None);
    }
    let half = mod_pow(base_x, period_r / 2, modulus_n);
    if half == modulus_n - 1 {
        return Ok(None);
    }
    let low = gcd(half - 1, modulus_n);
    let high = gcd(half + 1, modulus_n);
    if low > 1 && low < modulus_n && high > 1 && high < modulus_n {
        Ok(Some((low, high)))
    } else {
        Ok(None)
    }
}

/// One histogram row: an observed frequency estimate, how often it occurred,
/// and its relative frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HistogramRow {
    pub outcome: u64,
    pub count: usize,
    pub frequency: f64,
}

/// Histogram of run outcomes, sorted by outcome value.
pub fn histogram(records: &[RunRecord]) -> Vec<HistogramRow> {
    let mut counts: std::collections::BTreeMap<u64, usize> = std::collections::BTreeMap::new();
    for record in records {
        *counts.entry(record.frequency_estimate).or_default() += 1;
    }
    let total = records.len().max(1) as f64;
    counts
        .into_iter()
        .map(|(outcome, count)| HistogramRow {
            outcome,
            count,
            frequency: count as f64 / total,
        })
        .collect()
}

/// CSV export of the outcome histogram: `outcome,count,frequency`.
pub fn histogram_csv(records: &[RunRecord]) -> String {
    let mut out = String::from("outcome,count,frequency\n");
    for row in histogram(records) {
        out.push_str(&format!(
            "{},{},{}\n",
            row.outcome, row.count, row.frequency
        ));
    }
    out
}

#[derive(Serialize)]
struct Report<'a> {
    config: &'a OrderFindingConfig,
    work_register: &'static str,
    runs: &'a [RunRecord],
    histogram: Vec<HistogramRow>,
    period: Option<u64>,
    factors: Option<(u64, u64)>,
}

/// JSON export of a batch of runs: the configuration echo, every record's
/// measured bits in order and frequency estimate, the outcome histogram, and
/// the extracted period and factors when present.
pub fn report_json(config: &OrderFindingConfig, records: &[RunRecord]) -> String {
    let estimates: Vec<u64> = records.iter().map(|r| r.frequency_estimate).collect();
    let period = extract_period(&estimates, config.q(), config.modulus_n, config.base_x);
    let factors = period
        .and_then(|r| factor_from_period(config.modulus_n, config.base_x, r).ok())
        .flatten();
    let report = Report {
        config,
        work_register: "traced out, never read",
        runs: records,
        histogram: histogram(records),
        period,
        factors,
    };
    serde_json::to_string_pretty(&report).expect("report serializes")
}
