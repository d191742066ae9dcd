//! Parallel time-step layering of a gate plan.
//!
//! The assignment rule: Hadamard `P(I)` runs at time step `I+I`, controlled
//! phase `Q(I,J)` at step `I+J`. Steps execute from `2L−2` down to `0`, so a
//! full-width plan takes exactly `2L−1` steps. Gates sharing a step touch
//! disjoint qubits and may run simultaneously; approximate plans keep the
//! step numbers of their surviving gates and empty steps are dropped.

use std::collections::BTreeMap;
use std::fmt;

use crate::circuit::{CircuitPlan, GateOp};
use crate::error::Error;
use crate::matrix::Matrix;
use crate::numerics::{BasisIndex, StateVector};
use crate::Result;

/// Matrix-equivalence validation is capped at this width to stay fast.
pub const VALIDATE_MATRIX_MAX_WIDTH: usize = 7;

/// Gates sharing one time step. Stored in canonical order: Hadamards first,
/// then controlled phases by descending first qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    time_step: usize,
    gates: Vec<GateOp>,
}

impl Layer {
    pub fn time_step(&self) -> usize {
        self.time_step
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .gates
            .iter()
            .map(|g| match g {
                GateOp::Hadamard { j } => format!("P{j}"),
                GateOp::ControlledPhase { j, k, .. } => format!("Q{j}{k}"),
            })
            .collect();
        write!(f, "[{}]", names.join(" "))
    }
}

/// A plan partitioned into qubit-disjoint layers, in execution order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    width_l: usize,
    layers: Vec<Layer>,
}

impl Schedule {
    pub fn width_l(&self) -> usize {
        self.width_l
    }

    /// Non-empty layers in execution order (descending time step).
    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Number of non-empty layers; `2L−1` for the full transform plan.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Time steps in `0..2L−1` that hold no gate after approximation.
    pub fn empty_steps(&self) -> Vec<usize> {
        let occupied: Vec<usize> = self.layers.iter().map(Layer::time_step).collect();
        (0..2 * self.width_l - 1)
            .filter(|step| !occupied.contains(step))
            .collect()
    }

    /// Gates flattened in execution order.
    pub fn flattened(&self) -> Vec<GateOp> {
        self.layers
            .iter()
            .flat_map(|layer| layer.gates.iter().copied())
            .collect()
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.layers.iter().map(Layer::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn canonical_order(gates: &mut [GateOp]) {
    gates.sort_by_key(|g| match g {
        GateOp::Hadamard { j } => (0usize, usize::MAX - j, 0usize),
        GateOp::ControlledPhase { j, k, .. } => (1, usize::MAX - j, usize::MAX - k),
    });
}

/// Partition a plan into time-step layers by the assignment rule.
pub fn schedule_plan(plan: &CircuitPlan) -> Result<Schedule> {
    let width = plan.width_l();
    let mut steps: BTreeMap<usize, Vec<GateOp>> = BTreeMap::new();
    for gate in plan.gates() {
        if gate.max_qubit() >= width {
            return Err(Error::GateOutsideWidth {
                qubit: gate.max_qubit(),
                width,
            });
        }
        let step = match gate {
            GateOp::Hadamard { j } => j + j,
            GateOp::ControlledPhase { j, k, .. } => j + k,
        };
        steps.entry(step).or_default().push(*gate);
    }
    let layers = steps
        .into_iter()
        .rev()
        .map(|(time_step, mut gates)| {
            canonical_order(&mut gates);
            Layer { time_step, gates }
        })
        .collect();
    Ok(Schedule {
        width_l: width,
        layers,
    })
}

/// One validation failure, naming the offending layer or gates.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Two gates in one layer touch the same qubit.
    SharedQubit {
        time_step: usize,
        qubit: usize,
        gates: (GateOp, GateOp),
    },
    /// The flattened schedule is not the same gate multiset as the plan.
    GateMultisetMismatch { missing: usize, extra: usize },
    /// The layer-ordered unitary strays from the plan unitary.
    MatrixMismatch { max_abs_diff: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SharedQubit {
                time_step,
                qubit,
                gates,
            } => write!(
                f,
                "layer at step {time_step}: gates {} and {} share qubit {qubit}",
                gates.0, gates.1
            ),
            Violation::GateMultisetMismatch { missing, extra } => write!(
                f,
                "gate multiset differs from plan: {missing} missing, {extra} extra"
            ),
            Violation::MatrixMismatch { max_abs_diff } => {
                write!(
                    f,
                    "layer-product unitary differs from plan by {max_abs_diff:e}"
                )
            }
        }
    }
}

/// Outcome of checking a schedule against its source plan.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub disjoint: bool,
    pub complete: bool,
    /// `None` when the width exceeds [`VALIDATE_MATRIX_MAX_WIDTH`].
    pub matrix_equivalent: Option<bool>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.disjoint && self.complete && self.matrix_equivalent.unwrap_or(true)
    }
}

/// Check a schedule for per-layer qubit-disjointness, gate-multiset equality
/// with the plan, and (within the width guard) matrix equivalence of the
/// layer-ordered gate sequence against the plan.
pub fn validate_schedule(schedule: &Schedule, plan: &CircuitPlan) -> Result<ValidationReport> {
    let mut violations = Vec::new();

    let mut disjoint = true;
    for layer in schedule.layers() {
        for (i, a) in layer.gates().iter().enumerate() {
            for b in &layer.gates()[i + 1..] {
                if let Some(&qubit) = a.qubits().iter().find(|q| b.qubits().contains(q)) {
                    disjoint = false;
                    violations.push(Violation::SharedQubit {
                        time_step: layer.time_step(),
                        qubit,
                        gates: (*a, *b),
                    });
                }
            }
        }
    }

    let mut plan_gates: Vec<GateOp> = plan.gates().to_vec();
    let mut missing = 0usize;
    let mut extra = 0usize;
    for gate in schedule.flattened() {
        match plan_gates.iter().position(|g| *g == gate) {
            Some(pos) => {
                plan_gates.swap_remove(pos);
            }
            None => extra += 1,
        }
    }
    missing += plan_gates.len();
    let complete = missing == 0 && extra == 0;
    if !complete {
        violations.push(Violation::GateMultisetMismatch { missing, extra });
    }

    let matrix_equivalent = if plan.width_l() <= VALIDATE_MATRIX_MAX_WIDTH {
        let reference = plan.to_matrix()?;
        let reordered = gates_to_matrix(plan.width_l(), &schedule.flattened())?;
        let diff = reference.max_abs_diff(&reordered);
        let ok = diff <= 1e-10;
        if !ok {
            violations.push(Violation::MatrixMismatch { max_abs_diff: diff });
        }
        Some(ok)
    } else {
        None
    };

    Ok(ValidationReport {
        disjoint,
        complete,
        matrix_equivalent,
        violations,
    })
}

/// Dense unitary of an arbitrary gate sequence; column `a` is the sequence
/// applied to `|a⟩`.
fn gates_to_matrix(width: usize, gates: &[GateOp]) -> Result<Matrix> {
    let dim = 1usize << width;
    let mut columns = Vec::with_capacity(dim);
    for a in 0..dim {
        let mut sv = StateVector::basis_state(width, BasisIndex::new(a, width)?)?;
        for gate in gates {
            gate.apply(&mut sv)?;
        }
        columns.push(sv.into_amplitudes());
    }
    Ok(Matrix::from_columns(dim, |c| columns[c].clone()))
}
