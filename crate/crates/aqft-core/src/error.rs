//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by state construction, gate application, plan building,
/// scheduling, and order finding.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Register construction asked for more qubits than the simulator allows.
    #[error("qubit budget exceeded: {requested} qubits requested, limit is {max}")]
    QubitBudgetExceeded { requested: usize, max: usize },

    /// A basis index does not fit the register it was used with.
    #[error("basis index {index} out of range for {num_qubits} qubit(s)")]
    BasisIndexOutOfRange { index: usize, num_qubits: usize },

    /// A qubit index does not fit the register it was used with.
    #[error("qubit index {qubit} out of range for {num_qubits} qubit(s)")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    /// A two-qubit gate was given the same qubit twice.
    #[error("two-qubit gate needs distinct qubits, got {qubit} twice")]
    IdenticalQubits { qubit: usize },

    /// An amplitude vector with a length that is not a power of two.
    #[error("amplitude vector length {len} is not a power of two")]
    NotPowerOfTwoLength { len: usize },

    /// An amplitude vector whose squared-magnitude sum strays from 1.
    #[error("state is not normalized: squared-magnitude sum is {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    /// Measurement tried to select a branch with vanishing probability.
    #[error("degenerate measurement branch: probability {probability:e} is below {threshold:e}")]
    DegenerateBranch { probability: f64, threshold: f64 },

    /// A register width outside the supported range.
    #[error("register width {width} out of range, expected {min}..={max}")]
    WidthOutOfRange {
        width: usize,
        min: usize,
        max: usize,
    },

    /// An approximation parameter outside 1..=width.
    #[error(
        "approximation parameter {approx_m} out of range for width {width}, expected 1..={width}"
    )]
    ApproxOutOfRange { approx_m: usize, width: usize },

    /// A plan was run on a state with fewer qubits than the plan needs.
    #[error("plan acts on {plan_width} qubit(s) but the state has only {state_qubits}")]
    PlanWidthMismatch {
        plan_width: usize,
        state_qubits: usize,
    },

    /// A dense matrix was requested beyond the verification-scale guard.
    #[error("dense matrix width {width} exceeds guard {max}")]
    DenseWidthExceeded { width: usize, max: usize },

    /// A gate inside a plan or schedule refers to a qubit at or beyond the width.
    #[error("gate touches qubit {qubit} outside plan width {width}")]
    GateOutsideWidth { qubit: usize, width: usize },

    /// Malformed gate-list text.
    #[error("plan text line {line}: {reason}")]
    PlanParse { line: usize, reason: String },

    /// The order-finding base shares a factor with the modulus.
    #[error("base {base} is not coprime to modulus {modulus} (gcd {gcd})")]
    NotCoprime { base: u64, modulus: u64, gcd: u64 },

    /// An order-finding parameter outside its domain.
    #[error("invalid order-finding configuration: {reason}")]
    InvalidConfig { reason: String },

    /// `factor_from_period` was handed a period the base does not satisfy.
    #[error("period precondition failed: {base}^{period} != 1 (mod {modulus})")]
    PeriodPrecondition {
        base: u64,
        period: u64,
        modulus: u64,
    },
}
