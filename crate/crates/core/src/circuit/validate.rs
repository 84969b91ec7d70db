// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use super::instruction::{Circuit, Instruction};

/// One rule violation; `index` is the offending instruction's position.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NoQubits,
    RoleOutOfRange { qubit: usize },
    QubitOutOfRange { index: usize, qubit: usize },
    ClbitOutOfRange { index: usize, clbit: usize },
    RepeatedQubit { index: usize, qubit: usize },
    ConditionBeforeMeasure { index: usize, clbit: usize },
    BadConditionValue { index: usize, value: u8 },
    NegativeDelay { index: usize, duration: f64 },
    NonFiniteParameter { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoQubits => write!(f, "circuit has no qubits"),
            Violation::RoleOutOfRange { qubit } => {
                write!(f, "role assigned to missing qubit {qubit}")
            }
            Violation::QubitOutOfRange { index, qubit } => {
                write!(f, "instruction {index}: qubit {qubit} out of range")
            }
            Violation::ClbitOutOfRange { index, clbit } => {
                write!(f, "instruction {index}: clbit {clbit} out of range")
            }
            Violation::RepeatedQubit { index, qubit } => {
                write!(f, "instruction {index}: qubit {qubit} used twice")
            }
            Violation::ConditionBeforeMeasure { index, clbit } => write!(
                f,
                "instruction {index}: condition precedes measurement of c[{clbit}]"
            ),
            Violation::BadConditionValue { index, value } => {
                write!(f, "instruction {index}: condition value {value} is not 0 or 1")
            }
            Violation::NegativeDelay { index, duration } => {
                write!(f, "instruction {index}: negative delay {duration} us")
            }
            Violation::NonFiniteParameter { index } => {
                write!(f, "instruction {index}: non-finite angle or duration")
            }
        }
    }
}

/// Collects every rule violation in `circuit`.
pub fn validate(circuit: &Circuit) -> Result<(), Vec<Violation>> {
    let mut errs = Vec::new();
    if circuit.num_qubits == 0 {
        errs.push(Violation::NoQubits);
    }
    for &q in circuit.qubit_roles.keys() {
        if q >= circuit.num_qubits {
            errs.push(Violation::RoleOutOfRange { qubit: q });
        }
    }
    let mut written = vec![false; circuit.num_clbits];
    for (index, ins) in circuit.instructions.iter().enumerate() {
        let qubits = ins.qubits();
        for (k, &q) in qubits.iter().enumerate() {
            if q >= circuit.num_qubits {
                errs.push(Violation::QubitOutOfRange { index, qubit: q });
            }
            if qubits[..k].contains(&q) {
                errs.push(Violation::RepeatedQubit { index, qubit: q });
            }
        }
        match ins {
            Instruction::Ry { theta, .. } | Instruction::Cry { theta, .. } if !theta.is_finite() => {
                errs.push(Violation::NonFiniteParameter { index });
            }
            Instruction::Measure { clbit, .. } => {
                if let Some(w) = written.get_mut(*clbit) {
                    *w = true;
                } else {
                    errs.push(Violation::ClbitOutOfRange { index, clbit: *clbit });
                }
            }
            Instruction::ConditionalX { condition, .. } => {
                let c = condition.clbit;
                match written.get(c) {
                    None => errs.push(Violation::ClbitOutOfRange { index, clbit: c }),
                    Some(false) => errs.push(Violation::ConditionBeforeMeasure { index, clbit: c }),
                    Some(true) => {}
                }
                if condition.value > 1 {
                    errs.push(Violation::BadConditionValue {
                        index,
                        value: condition.value,
                    });
                }
            }
            Instruction::Delay { duration, .. } => {
                if duration.is_nan() || duration.is_infinite() {
                    errs.push(Violation::NonFiniteParameter { index });
                } else if *duration < 0.0 {
                    errs.push(Violation::NegativeDelay {
                        index,
                        duration: *duration,
                    });
                }
            }
            _ => {}
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}
