//! Dense statevector simulation of the radix-2^L Fourier transform built from
//! one- and two-qubit gates, together with its approximate variant, a parallel
//! gate schedule, reference transform matrices for verification, and an
//! order-finding pipeline with early per-qubit measurement.
//!
//! The crate is organised around five modules:
//!
//! - [`numerics`] — complex statevector storage, gate application, measurement;
//! - [`circuit`] — gate plans realising the transform and its approximation;
//! - [`transforms`] — dense reference matrices built straight from the
//!   defining summations, plus phase-deviation analysis;
//! - [`scheduler`] — partition of a plan into parallel time-step layers;
//! - [`order_finding`] — the rearranged period-finding computation and its
//!   measurement-free oracle.
//!
//! Everything is desk-scale by design: registers are capped at 26 qubits and
//! the dense matrix oracles at width 10.
//!
//! ```
//! use aqft_core::circuit::{bit_reverse_value, build_qft_plan};
//! use aqft_core::numerics::{BasisIndex, StateVector};
//!
//! // Transform |1⟩ on three qubits; outputs are indexed by the
//! // bit-reversal of the frequency, so frequency c sits at index rev(c).
//! let plan = build_qft_plan(3)?;
//! let mut state = StateVector::basis_state(3, BasisIndex::new(1, 3)?)?;
//! plan.run(&mut state)?;
//! let p = state.born_distribution()[bit_reverse_value(5, 3)];
//! assert!((p - 0.125).abs() < 1e-12);
//! # Ok::<(), aqft_core::Error>(())
//! ```

pub mod circuit;
pub mod error;
pub mod matrix;
pub mod numerics;
pub mod order_finding;
pub mod scheduler;
pub mod transforms;

pub use circuit::{bit_reverse, build_aqft_plan, build_qft_plan, CircuitPlan, GateOp};
pub use error::Error;
pub use numerics::{BasisIndex, PhaseExponent, StateVector};
pub use order_finding::OrderFindingConfig;
pub use scheduler::{schedule_plan, Schedule};
pub use transforms::{afft_matrix, deviation_report, dft_matrix, hadamard_matrix, TransformMatrix};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
