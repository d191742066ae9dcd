//! Gate plans for the radix-2^L Fourier transform and its approximation.
//!
//! A plan of width `L` runs in passes numbered `L−1` down to `0`. Pass `J`
//! applies the controlled-phase gates `Q(J,K)` for `K` descending from
//! `min(J+m−1, L−1)` to `J+1`, then the Hadamard `P(J)`. The full transform
//! keeps every `Q(J,K)`; the approximate variant with parameter `m` drops the
//! gates with `K ≥ J+m`. Outputs come out indexed by the bit-reversal of the
//! frequency index, and stay that way: callers who want frequency order apply
//! [`bit_reverse`] themselves.

use std::fmt;

use crate::error::Error;
use crate::matrix::Matrix;
use crate::numerics::{BasisIndex, PhaseExponent, StateVector, MAX_QUBITS};
use crate::Result;

/// Dense plan-to-matrix expansion is for verification only; widths beyond
/// this are refused.
pub const DENSE_MATRIX_MAX_WIDTH: usize = 10;

/// One gate of a plan: a Hadamard on a single qubit or a controlled phase on
/// an ordered pair `j < k` of qubits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum GateOp {
    Hadamard {
        j: usize,
    },
    ControlledPhase {
        j: usize,
        k: usize,
        phase: PhaseExponent,
    },
}

impl GateOp {
    pub fn hadamard(j: usize) -> Self {
        GateOp::Hadamard { j }
    }

    /// The canonical controlled phase of a width-`l` plan: exponent
    /// `2^(l−1−k+j)` modulo `2^l`, requiring `j < k < l`.
    pub fn controlled_phase(j: usize, k: usize, width_l: usize) -> Result<Self> {
        if j == k {
            return Err(Error::IdenticalQubits { qubit: j });
        }
        if j > k || k >= width_l {
            return Err(Error::GateOutsideWidth {
                qubit: j.max(k),
                width: width_l,
            });
        }
        Ok(GateOp::ControlledPhase {
            j,
            k,
            phase: PhaseExponent::new(1u64 << (width_l - 1 - k + j), width_l),
        })
    }

    /// Qubits the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::Hadamard { j } => vec![*j],
            GateOp::ControlledPhase { j, k, .. } => vec![*j, *k],
        }
    }

    /// Largest qubit index the gate touches.
    pub fn max_qubit(&self) -> usize {
        match self {
            GateOp::Hadamard { j } => *j,
            GateOp::ControlledPhase { j, k, .. } => (*j).max(*k),
        }
    }

    /// Apply the gate to a state.
    pub fn apply(&self, sv: &mut StateVector) -> Result<()> {
        match self {
            GateOp::Hadamard { j } => sv.apply_hadamard(*j),
            GateOp::ControlledPhase { j, k, phase } => sv.apply_controlled_phase(*j, *k, *phase),
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateOp::Hadamard { j } => write!(f, "P {j}"),
            GateOp::ControlledPhase { j, k, phase } => {
                write!(f, "Q {j} {k} {} {}", phase.exponent(), phase.modulus_log2())
            }
        }
    }
}

/// An ordered gate list with its `(L, m)` provenance; the first element is
/// applied first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitPlan {
    width_l: usize,
    approx_m: usize,
    gates: Vec<GateOp>,
}

impl CircuitPlan {
    pub fn width_l(&self) -> usize {
        self.width_l
    }

    pub fn approx_m(&self) -> usize {
        self.approx_m
    }

    /// Gates in application order.
    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    /// `(hadamard count, controlled-phase count)`.
    pub fn gate_counts(&self) -> (usize, usize) {
        let hadamards = self
            .gates
            .iter()
            .filter(|g| matches!(g, GateOp::Hadamard { .. }))
            .count();
        (hadamards, self.gates.len() - hadamards)
    }

    /// Apply every gate in order. The plan acts on qubits `0..width_l`; the
    /// state may be wider (extra qubits are untouched).
    pub fn run(&self, sv: &mut StateVector) -> Result<()> {
        if sv.num_qubits() < self.width_l {
            return Err(Error::PlanWidthMismatch {
                plan_width: self.width_l,
                state_qubits: sv.num_qubits(),
            });
        }
        for gate in &self.gates {
            gate.apply(sv)?;
        }
        Ok(())
    }

    /// Dense unitary of the plan: column `a` is the plan applied to basis
    /// state `|a⟩`. Rows are indexed by the bit-reversed frequency.
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.width_l > DENSE_MATRIX_MAX_WIDTH {
            return Err(Error::DenseWidthExceeded {
                width: self.width_l,
                max: DENSE_MATRIX_MAX_WIDTH,
            });
        }
        let dim = 1usize << self.width_l;
        let mut columns = Vec::with_capacity(dim);
        for a in 0..dim {
            let mut sv = StateVector::basis_state(self.width_l, BasisIndex::new(a, self.width_l)?)?;
            self.run(&mut sv)?;
            columns.push(sv.into_amplitudes());
        }
        Ok(Matrix::from_columns(dim, |c| columns[c].clone()))
    }

    /// One gate per line, in application order: `P <j>` or
    /// `Q <j> <k> <exponent> <modulus_log2>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for gate in &self.gates {
            out.push_str(&gate.to_string());
            out.push('\n');
        }
        out
    }

    /// Parse the line-oriented gate format. Width is inferred from the phase
    /// moduli when controlled-phase gates are present, otherwise from the
    /// largest qubit index; the approximation parameter is the largest
    /// `k − j` span plus one.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| -> Result<usize> {
                s.parse::<usize>().map_err(|_| Error::PlanParse {
                    line: line_no + 1,
                    reason: format!("expected integer, got {s:?}"),
                })
            };
            match fields.as_slice() {
                ["P", j] => gates.push(GateOp::hadamard(parse(j)?)),
                ["Q", j, k, exponent, modulus_log2] => {
                    let (j, k) = (parse(j)?, parse(k)?);
                    if j >= k {
                        return Err(Error::PlanParse {
                            line: line_no + 1,
                            reason: format!("controlled phase needs j < k, got {j} {k}"),
                        });
                    }
                    let modulus_log2 = parse(modulus_log2)?;
                    if modulus_log2 == 0 || modulus_log2 > MAX_QUBITS {
                        return Err(Error::PlanParse {
                            line: line_no + 1,
                            reason: format!(
                                "phase modulus 2^{modulus_log2} outside 2^1..=2^{MAX_QUBITS}"
                            ),
                        });
                    }
                    let exponent = exponent.parse::<u64>().map_err(|_| Error::PlanParse {
                        line: line_no + 1,
                        reason: format!("expected integer exponent, got {exponent:?}"),
                    })?;
                    if exponent >= (1u64 << modulus_log2) {
                        return Err(Error::PlanParse {
                            line: line_no + 1,
                            reason: format!(
                                "exponent {exponent} out of range for modulus 2^{modulus_log2}"
                            ),
                        });
                    }
                    gates.push(GateOp::ControlledPhase {
                        j,
                        k,
                        phase: PhaseExponent::new(exponent, modulus_log2),
                    });
                }
                _ => {
                    return Err(Error::PlanParse {
                        line: line_no + 1,
                        reason: format!("unrecognized gate line {line:?}"),
                    })
                }
            }
        }
        if gates.is_empty() {
            return Err(Error::PlanParse {
                line: 0,
                reason: "no gates in input".into(),
            });
        }
        let mut width_l = 0usize;
        let mut approx_m = 1usize;
        for gate in &gates {
            width_l = width_l.max(gate.max_qubit() + 1);
            if let GateOp::ControlledPhase { j, k, phase } = gate {
                width_l = width_l.max(phase.modulus_log2());
                approx_m = approx_m.max(k - j + 1);
            }
        }
        if width_l > MAX_QUBITS {
            return Err(Error::WidthOutOfRange {
                width: width_l,
                min: 1,
                max: MAX_QUBITS,
            });
        }
        Ok(CircuitPlan {
            width_l,
            approx_m,
            gates,
        })
    }
}

/// Full transform plan on `l` qubits: `l` Hadamards and `l(l−1)/2` controlled
/// phases in pass order.
pub fn build_qft_plan(l: usize) -> Result<CircuitPlan> {
    build_aqft_plan(l, l)
}

/// Approximate transform plan: the full plan with every `Q(J,K)` such that
/// `K ≥ J+m` deleted. `m = 1` leaves only Hadamards; `m = l` is the full
/// transform.
pub fn build_aqft_plan(l: usize, m: usize) -> Result<CircuitPlan> {
    if !(1..=MAX_QUBITS).contains(&l) {
        return Err(Error::WidthOutOfRange {
            width: l,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    if m < 1 || m > l {
        return Err(Error::ApproxOutOfRange {
            approx_m: m,
            width: l,
        });
    }
    let mut gates = Vec::new();
    for j in (0..l).rev() {
        let k_top = (j + m - 1).min(l - 1);
        for k in (j + 1..=k_top).rev() {
            gates.push(GateOp::controlled_phase(j, k, l)?);
        }
        gates.push(GateOp::hadamard(j));
    }
    Ok(CircuitPlan {
        width_l: l,
        approx_m: m,
        gates,
    })
}

/// Reverse the bits of an index within its width: output bit `i` is input bit
/// `width−1−i`. An involution.
pub fn bit_reverse(index: BasisIndex) -> BasisIndex {
    let width = index.width();
    let value = bit_reverse_value(index.value(), width);
    BasisIndex::new(value, width).expect("reversal stays in range")
}

/// Bit reversal on a raw value.
pub fn bit_reverse_value(value: usize, width: usize) -> usize {
    if width == 0 {
        return 0;
    }
    value.reverse_bits() >> (usize::BITS as usize - width)
}
