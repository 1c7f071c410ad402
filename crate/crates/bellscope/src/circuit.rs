//! A line-oriented circuit format and its interpreter.
//!
//! The format is one operation per line, lowercase mnemonics, base-10
//! operands, `#` to end-of-line comments, LF or CRLF:
//!
//! ```text
//! qubits 4          # header, required first
//! h 2               # single-qubit gate: i x y z h
//! cx 2 0            # controlled-X: control target
//! measure 2         # sample the qubit, append one classical bit
//! ```
//!
//! Measured qubits stay in the register, collapsed on the recorded bit, so
//! the interpreter replays measurement order faithfully; callers project or
//! discard ancillas afterwards when they want a marginal.

use crate::gates::StandardGate;
use crate::statevec::{StateError, StateVector, MAX_QUBITS};
use rand::Rng;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// One step of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitOp {
    Gate {
        gate: StandardGate,
        qubit: usize,
    },
    Controlled {
        gate: StandardGate,
        control: usize,
        target: usize,
    },
    Measure {
        qubit: usize,
    },
}

impl fmt::Display for CircuitOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitOp::Gate { gate, qubit } => write!(f, "{} {qubit}", gate.mnemonic()),
            CircuitOp::Controlled {
                gate,
                control,
                target,
            } => {
                write!(f, "c{} {control} {target}", gate.mnemonic())
            }
            CircuitOp::Measure { qubit } => write!(f, "measure {qubit}"),
        }
    }
}

/// A validated sequence of operations on a fixed-width register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<CircuitOp>,
}

/// Errors from reading circuit text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("first operation before any `qubits N` header")]
    MissingHeader,
    #[error("line {line}: second `qubits` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: qubit count {count} outside 1..={max}")]
    QubitCount {
        line: usize,
        count: usize,
        max: usize,
    },
    #[error("line {line}: unknown mnemonic {found:?}")]
    UnknownMnemonic { line: usize, found: String },
    #[error("line {line}: {mnemonic} takes {expected} operand(s), got {got}")]
    OperandCount {
        line: usize,
        mnemonic: String,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: invalid integer {found:?}")]
    InvalidOperand { line: usize, found: String },
    #[error("line {line}: qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange {
        line: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("line {line}: control and target are both qubit {qubit}")]
    SelfControl { line: usize, qubit: usize },
}

impl Circuit {
    /// An empty circuit on `num_qubits` qubits, 1..=24.
    pub fn new(num_qubits: usize) -> Result<Self, StateError> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(StateError::CapacityExceeded {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        Ok(Circuit {
            num_qubits,
            ops: Vec::new(),
        })
    }

    /// Appends one validated operation.
    pub fn push(&mut self, op: CircuitOp) -> Result<(), StateError> {
        match op {
            CircuitOp::Gate { qubit, .. } | CircuitOp::Measure { qubit } => {
                self.check_qubit(qubit)?;
            }
            CircuitOp::Controlled {
                control, target, ..
            } => {
                self.check_qubit(control)?;
                self.check_qubit(target)?;
                if control == target {
                    return Err(StateError::ControlEqualsTarget { qubit: control });
                }
            }
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    /// Applies the operations in order. Each `measure` consumes one draw
    /// from `rng` and appends one bit; the collapsed qubit stays in the
    /// register. With no `initial`, the run starts from `|0...0>`.
    pub fn run(
        &self,
        initial: Option<&StateVector>,
        rng: &mut impl Rng,
    ) -> Result<(StateVector, Vec<u8>), StateError> {
        let mut state = match initial {
            Some(s) => {
                if s.num_qubits() != self.num_qubits {
                    return Err(StateError::DimensionMismatch {
                        left: self.num_qubits,
                        right: s.num_qubits(),
                    });
                }
                s.clone()
            }
            None => StateVector::basis_state(self.num_qubits, &vec![0; self.num_qubits])?,
        };
        let mut bits = Vec::new();
        for op in &self.ops {
            state = match *op {
                CircuitOp::Gate { gate, qubit } => state.apply_single(&gate.gate(), qubit)?,
                CircuitOp::Controlled {
                    gate,
                    control,
                    target,
                } => state.apply_controlled(&gate.gate(), control, target)?,
                CircuitOp::Measure { qubit } => {
                    let (bit, collapsed) = state.measure_qubit(qubit, rng)?;
                    bits.push(bit);
                    collapsed
                }
            };
        }
        Ok((state, bits))
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), StateError> {
        if qubit >= self.num_qubits {
            return Err(StateError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let mnemonic = tokens[0];
            let operands = &tokens[1..];

            if mnemonic == "qubits" {
                if circuit.is_some() {
                    return Err(ParseError::DuplicateHeader { line });
                }
                let count = parse_operand(line, mnemonic, operands, 0)?;
                circuit = Some(Circuit::new(count).map_err(|_| ParseError::QubitCount {
                    line,
                    count,
                    max: MAX_QUBITS,
                })?);
                continue;
            }

            let target = circuit.as_mut().ok_or(ParseError::MissingHeader)?;
            let num_qubits = target.num_qubits;
            let op = match mnemonic {
                "i" | "x" | "y" | "z" | "h" => {
                    check_count(line, mnemonic, operands, 1)?;
                    CircuitOp::Gate {
                        gate: mnemonic.parse().expect("single-letter mnemonics are known"),
                        qubit: parse_operand(line, mnemonic, operands, 0)?,
                    }
                }
                "cx" => {
                    check_count(line, mnemonic, operands, 2)?;
                    CircuitOp::Controlled {
                        gate: StandardGate::X,
                        control: parse_operand(line, mnemonic, operands, 0)?,
                        target: parse_operand(line, mnemonic, operands, 1)?,
                    }
                }
                "measure" => {
                    check_count(line, mnemonic, operands, 1)?;
                    CircuitOp::Measure {
                        qubit: parse_operand(line, mnemonic, operands, 0)?,
                    }
                }
                other => {
                    return Err(ParseError::UnknownMnemonic {
                        line,
                        found: other.to_string(),
                    })
                }
            };
            let check = |qubit: usize| {
                if qubit >= num_qubits {
                    Err(ParseError::QubitOutOfRange {
                        line,
                        qubit,
                        num_qubits,
                    })
                } else {
                    Ok(())
                }
            };
            match op {
                CircuitOp::Gate { qubit, .. } | CircuitOp::Measure { qubit } => check(qubit)?,
                CircuitOp::Controlled {
                    control, target, ..
                } => {
                    check(control)?;
                    check(target)?;
                    if control == target {
                        return Err(ParseError::SelfControl {
                            line,
                            qubit: control,
                        });
                    }
                }
            }
            target.push(op).expect("operands validated above");
        }
        circuit.ok_or(ParseError::MissingHeader)
    }
}

impl fmt::Display for Circuit {
    /// Serializes back to the text format; `render` then parse is the
    /// identity on circuits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.num_qubits)?;
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

fn check_count(
    line: usize,
    mnemonic: &str,
    operands: &[&str],
    expected: usize,
) -> Result<(), ParseError> {
    if operands.len() != expected {
        return Err(ParseError::OperandCount {
            line,
            mnemonic: mnemonic.to_string(),
            expected,
            got: operands.len(),
        });
    }
    Ok(())
}

fn parse_operand(
    line: usize,
    mnemonic: &str,
    operands: &[&str],
    index: usize,
) -> Result<usize, ParseError> {
    let token = operands
        .get(index)
        .ok_or_else(|| ParseError::OperandCount {
            line,
            mnemonic: mnemonic.to_string(),
            expected: index + 1,
            got: operands.len(),
        })?;
    token.parse().map_err(|_| ParseError::InvalidOperand {
        line,
        found: token.to_string(),
    })
}

/// The monolithic 4-qubit discriminator: qubits 0 and 1 carry the channel
/// pair, qubit 2 is the first ancilla, qubit 3 the second. The two measured
/// bits land in order (a1, a2). Must agree with the stage-by-stage
/// [`crate::discriminator::discriminate`] on every input.
pub fn discriminator_circuit() -> Circuit {
    let mut c = Circuit::new(4).expect("4 qubits is in range");
    let ops = [
        // a1 round: X⊗X eigenvalue onto qubit 2
        CircuitOp::Gate {
            gate: StandardGate::H,
            qubit: 2,
        },
        CircuitOp::Controlled {
            gate: StandardGate::X,
            control: 2,
            target: 0,
        },
        CircuitOp::Controlled {
            gate: StandardGate::X,
            control: 2,
            target: 1,
        },
        CircuitOp::Gate {
            gate: StandardGate::H,
            qubit: 2,
        },
        CircuitOp::Measure { qubit: 2 },
        // a2 round: Z⊗Z eigenvalue onto qubit 3
        CircuitOp::Gate {
            gate: StandardGate::H,
            qubit: 0,
        },
        CircuitOp::Gate {
            gate: StandardGate::H,
            qubit: 1,
        },
        CircuitOp::Gate {
            gate: StandardGate::H,
            qubit: 3,
        },
        CircuitOp::Controlled {
            gate: StandardGate::X,
            control: 3,
            target: 0,
        },
        CircuitOp::Controlled {
            gate: StandardGate::X,
            control: 3,
            target: 1,
        },
        CircuitOp::Gate {
            gate: StandardGate::H,
            qubit: 0,
        },
        CircuitOp::Gate {
            gate: StandardGate::H,
            qubit: 1,
        },
        CircuitOp::Gate {
            gate: StandardGate::H,
            qubit: 3,
        },
        CircuitOp::Measure { qubit: 3 },
    ];
    for op in ops {
        c.push(op).expect("discriminator ops are validated");
    }
    c
}
