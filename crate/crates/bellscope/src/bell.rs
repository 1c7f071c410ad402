//! The Bell basis and the local operations that permute it.
//!
//! The four maximally entangled two-qubit states used throughout this crate:
//!
//! ```text
//! psi+ = (|00> + |11>)/√2        phi+ = (|01> + |10>)/√2
//! psi- = (|00> - |11>)/√2        phi- = (|01> - |10>)/√2
//! ```
//!
//! psi± carry even parity and phi± odd parity; the ± sign is the relative
//! phase. A Pauli on either qubit, or a Hadamard on both, maps each Bell
//! state to another Bell state (up to global phase), which is what makes the
//! dense-coding round trip in [`crate::discriminator`] work.

use crate::gates::StandardGate;
use crate::statevec::{StateError, StateVector};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Classification accepts a state as a Bell state when its fidelity with one
/// of the four is at least `1 - tol`.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Names for the four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellLabel {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellLabel {
    /// All labels in index order.
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
    ];

    /// Position within [`BellLabel::ALL`].
    pub fn index(self) -> usize {
        match self {
            BellLabel::PsiPlus => 0,
            BellLabel::PsiMinus => 1,
            BellLabel::PhiPlus => 2,
            BellLabel::PhiMinus => 3,
        }
    }

    /// The lowercase name used by the CLI: `psi+`, `psi-`, `phi+`, `phi-`.
    pub fn name(self) -> &'static str {
        match self {
            BellLabel::PsiPlus => "psi+",
            BellLabel::PsiMinus => "psi-",
            BellLabel::PhiPlus => "phi+",
            BellLabel::PhiMinus => "phi-",
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Raised when a string is not one of the four Bell-state names.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown Bell state {0:?}; expected psi+, psi-, phi+, or phi-")]
pub struct UnknownBellLabelError(pub String);

impl FromStr for BellLabel {
    type Err = UnknownBellLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "psi+" => Ok(BellLabel::PsiPlus),
            "psi-" => Ok(BellLabel::PsiMinus),
            "phi+" => Ok(BellLabel::PhiPlus),
            "phi-" => Ok(BellLabel::PhiMinus),
            other => Err(UnknownBellLabelError(other.to_string())),
        }
    }
}

/// The exact two-qubit state for a label.
pub fn bell_state(label: BellLabel) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let p = Complex64::new(h, 0.0);
    let n = Complex64::new(-h, 0.0);
    let amps = match label {
        BellLabel::PsiPlus => vec![p, z, z, p],
        BellLabel::PsiMinus => vec![p, z, z, n],
        BellLabel::PhiPlus => vec![z, p, p, z],
        BellLabel::PhiMinus => vec![z, p, n, z],
    };
    StateVector::from_amplitudes(amps).expect("Bell amplitudes are normalized")
}

/// Identifies which Bell state a two-qubit state is, up to global phase.
/// Returns `None` when no fidelity reaches `1 - tol`.
pub fn classify_bell(state: &StateVector, tol: f64) -> Result<Option<BellLabel>, StateError> {
    if state.num_qubits() != 2 {
        return Err(StateError::NotTwoQubits {
            got: state.num_qubits(),
        });
    }
    let mut best = None;
    let mut best_fid = f64::NEG_INFINITY;
    for label in BellLabel::ALL {
        let fid = state.fidelity_up_to_phase(&bell_state(label))?;
        if fid > best_fid {
            best_fid = fid;
            best = Some(label);
        }
    }
    Ok(if best_fid >= 1.0 - tol { best } else { None })
}

/// Local operations that permute the Bell basis: a single Pauli on qubit 1
/// or 2 (1-based, matching the usual subscripts), or a Hadamard on both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalOp {
    X1,
    X2,
    Y1,
    Y2,
    Z1,
    Z2,
    HH,
}

impl LocalOp {
    pub const ALL: [LocalOp; 7] = [
        LocalOp::X1,
        LocalOp::X2,
        LocalOp::Y1,
        LocalOp::Y2,
        LocalOp::Z1,
        LocalOp::Z2,
        LocalOp::HH,
    ];

    /// The lowercase name used by the CLI.
    pub fn name(self) -> &'static str {
        match self {
            LocalOp::X1 => "x1",
            LocalOp::X2 => "x2",
            LocalOp::Y1 => "y1",
            LocalOp::Y2 => "y2",
            LocalOp::Z1 => "z1",
            LocalOp::Z2 => "z2",
            LocalOp::HH => "hh",
        }
    }
}

impl fmt::Display for LocalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Raised when a string is not one of the seven local-operation names.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown local operation {0:?}; expected x1, x2, y1, y2, z1, z2, or hh")]
pub struct UnknownLocalOpError(pub String);

impl FromStr for LocalOp {
    type Err = UnknownLocalOpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x1" => Ok(LocalOp::X1),
            "x2" => Ok(LocalOp::X2),
            "y1" => Ok(LocalOp::Y1),
            "y2" => Ok(LocalOp::Y2),
            "z1" => Ok(LocalOp::Z1),
            "z2" => Ok(LocalOp::Z2),
            "hh" => Ok(LocalOp::HH),
            other => Err(UnknownLocalOpError(other.to_string())),
        }
    }
}

/// Applies the operation to a two-qubit state.
pub fn apply_local_op(op: LocalOp, state: &StateVector) -> Result<StateVector, StateError> {
    if state.num_qubits() != 2 {
        return Err(StateError::NotTwoQubits {
            got: state.num_qubits(),
        });
    }
    match op {
        LocalOp::X1 => state.apply_single(&StandardGate::X.gate(), 0),
        LocalOp::X2 => state.apply_single(&StandardGate::X.gate(), 1),
        LocalOp::Y1 => state.apply_single(&StandardGate::Y.gate(), 0),
        LocalOp::Y2 => state.apply_single(&StandardGate::Y.gate(), 1),
        LocalOp::Z1 => state.apply_single(&StandardGate::Z.gate(), 0),
        LocalOp::Z2 => state.apply_single(&StandardGate::Z.gate(), 1),
        LocalOp::HH => state
            .apply_single(&StandardGate::H.gate(), 0)?
            .apply_single(&StandardGate::H.gate(), 1),
    }
}

/// Which Bell state the operation turns `label` into. Pauli X on either
/// qubit flips parity, Z flips phase, Y flips both; H on both qubits swaps
/// psi- with phi+ and fixes psi+ and phi-.
pub fn transform_label(op: LocalOp, label: BellLabel) -> BellLabel {
    use BellLabel::*;
    use LocalOp::*;
    match (op, label) {
        (X1 | X2, PsiPlus) => PhiPlus,
        (X1 | X2, PhiPlus) => PsiPlus,
        (X1 | X2, PsiMinus) => PhiMinus,
        (X1 | X2, PhiMinus) => PsiMinus,
        (Y1 | Y2, PsiPlus) => PhiMinus,
        (Y1 | Y2, PhiMinus) => PsiPlus,
        (Y1 | Y2, PsiMinus) => PhiPlus,
        (Y1 | Y2, PhiPlus) => PsiMinus,
        (Z1 | Z2, PsiPlus) => PsiMinus,
        (Z1 | Z2, PsiMinus) => PsiPlus,
        (Z1 | Z2, PhiPlus) => PhiMinus,
        (Z1 | Z2, PhiMinus) => PhiPlus,
        (HH, PsiPlus) => PsiPlus,
        (HH, PsiMinus) => PhiPlus,
        (HH, PhiPlus) => PsiMinus,
        (HH, PhiMinus) => PhiMinus,
    }
}
