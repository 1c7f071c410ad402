//! Complex-amplitude state vectors over n qubits.
//!
//! A [`StateVector`] holds the 2^n amplitudes of an n-qubit register. Qubit 0
//! is the leftmost symbol of the ket, so `|b0 b1 ... b(n-1)>` reads
//! left-to-right and qubit k contributes `b_k · 2^(n-1-k)` to the basis
//! index. For two qubits the amplitudes are therefore ordered
//! `|00>, |01>, |10>, |11>`.
//!
//! Every operation returns a fresh state; values are plain immutable data,
//! safe to move between threads. Randomness enters only through the explicit
//! `rng` argument of [`StateVector::measure_qubit`].

use crate::gates::Gate;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt;
use thiserror::Error;

/// Largest supported register. 2^24 amplitudes keeps memory bounded while
/// leaving plenty of headroom over the four qubits the protocol needs.
pub const MAX_QUBITS: usize = 24;

/// Stored states must be normalized within this bound.
const NORMALIZATION_TOL: f64 = 1e-10;

/// Outcomes with probability below this threshold cannot be projected onto
/// and are never reported by sampling.
const IMPOSSIBLE_OUTCOME_TOL: f64 = 1e-14;

/// Errors produced by state-vector operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("control and target both refer to qubit {qubit}")]
    ControlEqualsTarget { qubit: usize },
    #[error("expected {expected} bits, got {got}")]
    BitCountMismatch { expected: usize, got: usize },
    #[error("bit values must be 0 or 1, got {got}")]
    InvalidBit { got: u8 },
    #[error("{requested} qubits outside the supported range 1..={max}")]
    CapacityExceeded { requested: usize, max: usize },
    #[error("state dimensions differ: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected a 2-qubit state, got {got} qubits")]
    NotTwoQubits { got: usize },
    #[error("outcome {bit} on qubit {qubit} has probability below 1e-14")]
    ImpossibleOutcome { qubit: usize, bit: u8 },
    #[error("qubit {qubit} is not in a definite basis state")]
    IndefiniteQubit { qubit: usize },
    #[error("amplitude count {got} is not a power of two in range")]
    BadAmplitudeCount { got: usize },
    #[error("amplitudes must be finite")]
    NonFiniteAmplitude,
    #[error("amplitude norm {norm} is not 1 within 1e-10")]
    NotNormalized { norm: f64 },
}

/// A normalized vector of 2^n complex amplitudes over n qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state `|bits[0] bits[1] ...>`.
    pub fn basis_state(num_qubits: usize, bits: &[u8]) -> Result<Self, StateError> {
        check_capacity(num_qubits)?;
        if bits.len() != num_qubits {
            return Err(StateError::BitCountMismatch {
                expected: num_qubits,
                got: bits.len(),
            });
        }
        let mut index = 0usize;
        for (k, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(StateError::InvalidBit { got: b });
            }
            index |= (b as usize) << (num_qubits - 1 - k);
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Builds a state from raw amplitudes in basis order. The length must be
    /// a power of two and the vector must already be normalized within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, StateError> {
        let num_qubits = amps.len().trailing_zeros() as usize;
        if amps.len() < 2 || amps.len() != 1 << num_qubits {
            return Err(StateError::BadAmplitudeCount { got: amps.len() });
        }
        check_capacity(num_qubits)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(StateError::NonFiniteAmplitude);
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(StateError::NotNormalized { norm });
        }
        Ok(StateVector { num_qubits, amps })
    }

    /// A Haar-like random state: normalized complex-Gaussian amplitudes.
    pub fn random(num_qubits: usize, rng: &mut impl Rng) -> Result<Self, StateError> {
        check_capacity(num_qubits)?;
        let dim = 1 << num_qubits;
        loop {
            let amps: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                let amps = amps.into_iter().map(|a| a / norm).collect();
                return Ok(StateVector { num_qubits, amps });
            }
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Kronecker product `self ⊗ other`; `self`'s qubits come first.
    pub fn tensor(&self, other: &StateVector) -> Result<Self, StateError> {
        let num_qubits = self.num_qubits + other.num_qubits;
        check_capacity(num_qubits)?;
        let m = other.amps.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        for (i, &a) in self.amps.iter().enumerate() {
            for (j, &b) in other.amps.iter().enumerate() {
                amps[i * m + j] = a * b;
            }
        }
        Ok(StateVector { num_qubits, amps })
    }

    /// Applies a single-qubit gate to the designated qubit.
    pub fn apply_single(&self, gate: &Gate, qubit: usize) -> Result<Self, StateError> {
        let mask = self.qubit_mask(qubit)?;
        let m = gate.matrix();
        let mut amps = self.amps.clone();
        for idx in 0..amps.len() {
            if idx & mask == 0 {
                let j = idx | mask;
                let a = amps[idx];
                let b = amps[j];
                amps[idx] = m[0][0] * a + m[0][1] * b;
                amps[j] = m[1][0] * a + m[1][1] * b;
            }
        }
        Ok(StateVector {
            num_qubits: self.num_qubits,
            amps,
        })
    }

    /// Applies `gate` to `target` on the subspace where `control` is 1 and
    /// acts as the identity elsewhere.
    pub fn apply_controlled(
        &self,
        gate: &Gate,
        control: usize,
        target: usize,
    ) -> Result<Self, StateError> {
        if control == target {
            return Err(StateError::ControlEqualsTarget { qubit: control });
        }
        let cmask = self.qubit_mask(control)?;
        let tmask = self.qubit_mask(target)?;
        let m = gate.matrix();
        let mut amps = self.amps.clone();
        for idx in 0..amps.len() {
            if idx & cmask != 0 && idx & tmask == 0 {
                let j = idx | tmask;
                let a = amps[idx];
                let b = amps[j];
                amps[idx] = m[0][0] * a + m[0][1] * b;
                amps[j] = m[1][0] * a + m[1][1] * b;
            }
        }
        Ok(StateVector {
            num_qubits: self.num_qubits,
            amps,
        })
    }

    /// Probabilities `(p0, p1)` of measuring the qubit as 0 or 1.
    pub fn outcome_probs(&self, qubit: usize) -> Result<(f64, f64), StateError> {
        let mask = self.qubit_mask(qubit)?;
        let mut p0 = 0.0;
        let mut p1 = 0.0;
        for (idx, amp) in self.amps.iter().enumerate() {
            if idx & mask == 0 {
                p0 += amp.norm_sqr();
            } else {
                p1 += amp.norm_sqr();
            }
        }
        Ok((p0, p1))
    }

    /// Projects the qubit onto `bit` and renormalizes, returning the outcome
    /// probability alongside the collapsed state. Projecting onto an outcome
    /// with probability below 1e-14 is an error.
    pub fn project_qubit(&self, qubit: usize, bit: u8) -> Result<(f64, Self), StateError> {
        if bit > 1 {
            return Err(StateError::InvalidBit { got: bit });
        }
        let mask = self.qubit_mask(qubit)?;
        let (p0, p1) = self.outcome_probs(qubit)?;
        let prob = if bit == 0 { p0 } else { p1 };
        if prob < IMPOSSIBLE_OUTCOME_TOL {
            return Err(StateError::ImpossibleOutcome { qubit, bit });
        }
        let keep_value = if bit == 0 { 0 } else { mask };
        let scale = 1.0 / prob.sqrt();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(idx, &a)| {
                if idx & mask == keep_value {
                    a * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((
            prob,
            StateVector {
                num_qubits: self.num_qubits,
                amps,
            },
        ))
    }

    /// Samples a measurement of the qubit and collapses accordingly. Exactly
    /// one uniform draw is consumed per call, so results are reproducible
    /// from the rng stream state. Outcomes below the 1e-14 probability
    /// threshold are never reported.
    pub fn measure_qubit(
        &self,
        qubit: usize,
        rng: &mut impl Rng,
    ) -> Result<(u8, Self), StateError> {
        let (p0, p1) = self.outcome_probs(qubit)?;
        let u: f64 = rng.random();
        let mut bit = u8::from(u >= p0);
        if bit == 1 && p1 < IMPOSSIBLE_OUTCOME_TOL {
            bit = 0;
        } else if bit == 0 && p0 < IMPOSSIBLE_OUTCOME_TOL {
            bit = 1;
        }
        let (_, collapsed) = self.project_qubit(qubit, bit)?;
        Ok((bit, collapsed))
    }

    /// `<self|other>`, conjugating `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64, StateError> {
        if self.num_qubits != other.num_qubits {
            return Err(StateError::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|²`: 1 exactly when the states differ only by a global
    /// phase, 0 when they are orthogonal.
    pub fn fidelity_up_to_phase(&self, other: &StateVector) -> Result<f64, StateError> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// Removes a qubit that already holds a definite value (after a
    /// measurement collapsed it), returning the bit and the reduced state.
    pub fn discard_qubit(&self, qubit: usize) -> Result<(u8, Self), StateError> {
        let mask = self.qubit_mask(qubit)?;
        if self.num_qubits == 1 {
            return Err(StateError::IndefiniteQubit { qubit });
        }
        let (p0, p1) = self.outcome_probs(qubit)?;
        let bit = if p1 < IMPOSSIBLE_OUTCOME_TOL {
            0u8
        } else if p0 < IMPOSSIBLE_OUTCOME_TOL {
            1u8
        } else {
            return Err(StateError::IndefiniteQubit { qubit });
        };
        let low = mask - 1;
        let keep_value = if bit == 0 { 0 } else { mask };
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (self.num_qubits - 1)];
        for (reduced, slot) in amps.iter_mut().enumerate() {
            let full = ((reduced & !low) << 1) | keep_value | (reduced & low);
            *slot = self.amps[full];
        }
        Ok((
            bit,
            StateVector {
                num_qubits: self.num_qubits - 1,
                amps,
            },
        ))
    }

    /// Bit mask selecting `qubit`'s position within a basis index.
    fn qubit_mask(&self, qubit: usize) -> Result<usize, StateError> {
        if qubit >= self.num_qubits {
            return Err(StateError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(1 << (self.num_qubits - 1 - qubit))
    }
}

impl fmt::Display for StateVector {
    /// Nonzero amplitudes in ket notation, e.g. `(0.7071+0.0000i)|00>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, amp) in self.amps.iter().enumerate() {
            if amp.norm_sqr() < 1e-24 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.4}{:+.4}i)|", amp.re, amp.im)?;
            for k in 0..self.num_qubits {
                let bit = (idx >> (self.num_qubits - 1 - k)) & 1;
                write!(f, "{bit}")?;
            }
            write!(f, ">")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn check_capacity(num_qubits: usize) -> Result<(), StateError> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(StateError::CapacityExceeded {
            requested: num_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}
