//! Dense complex statevector storage, gate application, and measurement.
//!
//! Basis index `i` is read little-endian: qubit `j` carries bit weight `2^j`.
//! Every other module inherits this convention.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::error::Error;
use crate::Result;

/// Hard cap on register width; 2^26 amplitudes is the largest state this
/// simulator will allocate.
pub const MAX_QUBITS: usize = 26;

/// Measurement branches with probability below this are refused rather than
/// renormalized; well below accumulated rounding at any supported width.
pub const DEGENERATE_BRANCH_THRESHOLD: f64 = 1e-15;

/// A basis-state index together with the register width it lives in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    value: usize,
    width: usize,
}

impl BasisIndex {
    /// A basis index `value` in a `width`-bit register; `value < 2^width`.
    pub fn new(value: usize, width: usize) -> Result<Self> {
        if width > usize::BITS as usize - 1 {
            return Err(Error::WidthOutOfRange {
                width,
                min: 0,
                max: usize::BITS as usize - 1,
            });
        }
        if value >= 1usize << width {
            return Err(Error::BasisIndexOutOfRange {
                index: value,
                num_qubits: width,
            });
        }
        Ok(BasisIndex { value, width })
    }

    pub fn value(&self) -> usize {
        self.value
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Bit `i` of the index.
    pub fn bit(&self, i: usize) -> usize {
        (self.value >> i) & 1
    }
}

/// An exact phase `exp(2πi · exponent / 2^modulus_log2)` kept as an integer
/// until it has to become a complex number, so repeated gate construction
/// never accumulates floating-point drift.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseExponent {
    exponent: u64,
    modulus_log2: usize,
}

impl PhaseExponent {
    /// Reduce `exponent` modulo `2^modulus_log2`. The modulus exponent must
    /// stay below 64 so the realized denominator fits a machine word.
    pub fn new(exponent: u64, modulus_log2: usize) -> Self {
        assert!(modulus_log2 < 64, "phase modulus exponent too large");
        PhaseExponent {
            exponent: exponent & ((1u64 << modulus_log2) - 1),
            modulus_log2,
        }
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn modulus_log2(&self) -> usize {
        self.modulus_log2
    }

    /// Realize the phase as a unit-magnitude complex number.
    pub fn to_complex(&self) -> Complex64 {
        let denom = (1u64 << self.modulus_log2) as f64;
        Complex64::from_polar(1.0, TAU * self.exponent as f64 / denom)
    }
}

/// Dense state of a qubit register: `2^num_qubits` complex amplitudes.
#[derive(Clone, Debug)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    fn check_width(num_qubits: usize) -> Result<()> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::QubitBudgetExceeded {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        Ok(())
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Computational basis state `|index⟩` on `num_qubits` qubits.
    pub fn basis_state(num_qubits: usize, index: BasisIndex) -> Result<Self> {
        Self::check_width(num_qubits)?;
        if index.value() >= 1usize << num_qubits {
            return Err(Error::BasisIndexOutOfRange {
                index: index.value(),
                num_qubits,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index.value()] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// The all-zeros basis state.
    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        Self::basis_state(num_qubits, BasisIndex::new(0, num_qubits)?)
    }

    /// Uniform superposition: every amplitude is `2^(−num_qubits/2)`.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        Self::check_width(num_qubits)?;
        let len = 1usize << num_qubits;
        let amp = Complex64::new((len as f64).sqrt().recip(), 0.0);
        Ok(StateVector {
            num_qubits,
            amps: vec![amp; len],
        })
    }

    /// Adopt a raw amplitude vector. The length must be a power of two within
    /// the qubit budget and the squared-magnitude sum must be 1 within 1e-12.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwoLength { len });
        }
        let num_qubits = len.trailing_zeros() as usize;
        Self::check_width(num_qubits)?;
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sqr - 1.0).abs();
        if !deviation.is_finite() || deviation > 1e-12 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// The raw amplitudes, indexed little-endian.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// Sum of squared magnitudes; 1 for a normalized state.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Apply `(1/√2)[[1,1],[1,−1]]` to one qubit. Pairs of amplitudes whose
    /// indices differ only in bit `qubit` are mixed in place.
    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let step = 1usize << qubit;
        for base in (0..self.amps.len()).step_by(2 * step) {
            for offset in 0..step {
                let i0 = base + offset;
                let i1 = i0 | step;
                let a = self.amps[i0];
                let b = self.amps[i1];
                self.amps[i0] = (a + b) * FRAC_1_SQRT_2;
                self.amps[i1] = (a - b) * FRAC_1_SQRT_2;
            }
        }
        Ok(())
    }

    /// Multiply every amplitude whose index has a 1 in both bit positions by
    /// the phase. Diagonal, hence symmetric in the two qubits.
    pub fn apply_controlled_phase(
        &mut self,
        qubit_a: usize,
        qubit_b: usize,
        phase: PhaseExponent,
    ) -> Result<()> {
        if qubit_a == qubit_b {
            return Err(Error::IdenticalQubits { qubit: qubit_a });
        }
        self.check_qubit(qubit_a)?;
        self.check_qubit(qubit_b)?;
        let mask = (1usize << qubit_a) | (1usize << qubit_b);
        let factor = phase.to_complex();
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp *= factor;
            }
        }
        Ok(())
    }

    /// Probability that measuring `qubit` yields 1.
    pub fn qubit_one_probability(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Project onto `qubit = outcome` and renormalize, returning the branch
    /// probability. Refuses branches below [`DEGENERATE_BRANCH_THRESHOLD`].
    pub fn collapse_qubit(&mut self, qubit: usize, outcome: u8) -> Result<f64> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        let keep = |i: usize| ((i & bit != 0) as u8) == outcome;
        let probability: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if probability < DEGENERATE_BRANCH_THRESHOLD {
            return Err(Error::DegenerateBranch {
                probability,
                threshold: DEGENERATE_BRANCH_THRESHOLD,
            });
        }
        let scale = probability.sqrt().recip();
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if keep(i) {
                *amp *= scale;
            } else {
                *amp = Complex64::new(0.0, 0.0);
            }
        }
        Ok(probability)
    }

    /// Measure one qubit. The caller supplies the random draw in `[0,1)` so
    /// measurement stays deterministic under test; the outcome is 1 exactly
    /// when `draw < P(1)`. The state collapses to the selected branch.
    pub fn measure_qubit(&mut self, qubit: usize, draw: f64) -> Result<u8> {
        let p_one = self.qubit_one_probability(qubit)?;
        let outcome = u8::from(draw < p_one);
        self.collapse_qubit(qubit, outcome)?;
        Ok(outcome)
    }

    /// Born-rule probability table over all basis indices.
    pub fn born_distribution(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}
