//! The fixed catalog of 2x2 unitaries used by the discrimination protocol.

use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Elementwise tolerance for the unitarity check on construction.
const UNITARITY_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A 2x2 unitary matrix. Construction verifies U·U† = I, so every `Gate`
/// value in circulation is unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    m: [[Complex64; 2]; 2],
}

/// Returned when a matrix handed to [`Gate::new`] fails the unitarity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("matrix is not unitary within 1e-12")]
pub struct NonUnitaryError;

impl Gate {
    /// Builds a gate from an explicit matrix, rejecting anything that is not
    /// unitary within `1e-12` elementwise.
    #[allow(clippy::needless_range_loop)] // index loops mirror the Σ_k formula
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self, NonUnitaryError> {
        for row in 0..2 {
            for col in 0..2 {
                // (U U†)[row][col] = Σ_k U[row][k] · conj(U[col][k])
                let mut acc = c(0.0, 0.0);
                for k in 0..2 {
                    acc += m[row][k] * m[col][k].conj();
                }
                let expect = if row == col { 1.0 } else { 0.0 };
                if (acc - c(expect, 0.0)).norm() > UNITARITY_TOL {
                    return Err(NonUnitaryError);
                }
            }
        }
        Ok(Gate { m })
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    /// Matrix product `self · other` (apply `other` first).
    #[allow(clippy::needless_range_loop)] // index loops mirror the Σ_k formula
    pub fn compose(&self, other: &Gate) -> Gate {
        let mut m = [[c(0.0, 0.0); 2]; 2];
        for row in 0..2 {
            for col in 0..2 {
                for k in 0..2 {
                    m[row][col] += self.m[row][k] * other.m[k][col];
                }
            }
        }
        // products of unitaries stay unitary
        Gate::new(m).expect("product of unitaries")
    }
}

/// The named single-qubit gates understood by the protocol and the circuit
/// format: identity, the three Paulis, and the Hadamard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StandardGate {
    I,
    X,
    Y,
    Z,
    H,
}

/// Returned when a gate mnemonic is not in the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown gate name `{0}`")]
pub struct UnknownGateError(pub String);

impl StandardGate {
    pub const ALL: [StandardGate; 5] = [
        StandardGate::I,
        StandardGate::X,
        StandardGate::Y,
        StandardGate::Z,
        StandardGate::H,
    ];

    /// The conventional matrix for this gate.
    pub fn gate(self) -> Gate {
        use std::f64::consts::FRAC_1_SQRT_2 as S;
        let m = match self {
            StandardGate::I => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
            StandardGate::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            StandardGate::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
            StandardGate::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
            StandardGate::H => [[c(S, 0.0), c(S, 0.0)], [c(S, 0.0), c(-S, 0.0)]],
        };
        Gate::new(m).expect("catalog gates are unitary")
    }

    /// Lowercase mnemonic used by the circuit text format.
    pub fn mnemonic(self) -> &'static str {
        match self {
            StandardGate::I => "i",
            StandardGate::X => "x",
            StandardGate::Y => "y",
            StandardGate::Z => "z",
            StandardGate::H => "h",
        }
    }
}

impl fmt::Display for StandardGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

impl FromStr for StandardGate {
    type Err = UnknownGateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "i" => Ok(StandardGate::I),
            "x" => Ok(StandardGate::X),
            "y" => Ok(StandardGate::Y),
            "z" => Ok(StandardGate::Z),
            "h" => Ok(StandardGate::H),
            other => Err(UnknownGateError(other.to_string())),
        }
    }
}
