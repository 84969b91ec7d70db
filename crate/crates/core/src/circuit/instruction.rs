// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CircuitError;

/// Version written into, and required from, circuit JSON documents.
pub const CIRCUIT_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitRole {
    Control,
    Test,
    AncillaControl,
    AncillaTest,
    Gravity1,
    Gravity2,
}

impl QubitRole {
    pub fn as_str(self) -> &'static str {
        match self {
            QubitRole::Control => "control",
            QubitRole::Test => "test",
            QubitRole::AncillaControl => "ancilla_control",
            QubitRole::AncillaTest => "ancilla_test",
            QubitRole::Gravity1 => "gravity1",
            QubitRole::Gravity2 => "gravity2",
        }
    }
}

/// Classical guard `c[clbit] == value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Condition {
    pub clbit: usize,
    pub value: u8,
}

/// One circuit step. Durations are in microseconds, angles in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WireInstruction", into = "WireInstruction")]
pub enum Instruction {
    X { qubit: usize },
    H { qubit: usize },
    Ry { qubit: usize, theta: f64 },
    Cry { control: usize, target: usize, theta: f64 },
    Measure { qubit: usize, clbit: usize },
    ConditionalX { qubit: usize, condition: Condition },
    Delay { qubits: Vec<usize>, duration: f64 },
}

impl Instruction {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Instruction::X { qubit }
            | Instruction::H { qubit }
            | Instruction::Ry { qubit, .. }
            | Instruction::Measure { qubit, .. }
            | Instruction::ConditionalX { qubit, .. } => vec![*qubit],
            Instruction::Cry { control, target, .. } => vec![*control, *target],
            Instruction::Delay { qubits, .. } => qubits.clone(),
        }
    }

    pub fn kind(&self) -> InstructionKind {
        match self {
            Instruction::X { .. } => InstructionKind::X,
            Instruction::H { .. } => InstructionKind::H,
            Instruction::Ry { .. } => InstructionKind::Ry,
            Instruction::Cry { .. } => InstructionKind::Cry,
            Instruction::Measure { .. } => InstructionKind::Measure,
            Instruction::ConditionalX { .. } => InstructionKind::ConditionalX,
            Instruction::Delay { .. } => InstructionKind::Delay,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstructionKind {
    X,
    H,
    Ry,
    Cry,
    Measure,
    ConditionalX,
    Delay,
}

/// Flat JSON shape of an instruction.
#[derive(Serialize, Deserialize)]
struct WireInstruction {
    kind: InstructionKind,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clbit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    condition: Option<Condition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    duration: Option<f64>,
}

impl From<Instruction> for WireInstruction {
    fn from(ins: Instruction) -> Self {
        let mut w = WireInstruction {
            kind: ins.kind(),
            qubits: ins.qubits(),
            clbit: None,
            condition: None,
            theta: None,
            duration: None,
        };
        match ins {
            Instruction::Ry { theta, .. } | Instruction::Cry { theta, .. } => w.theta = Some(theta),
            Instruction::Measure { clbit, .. } => w.clbit = Some(clbit),
            Instruction::ConditionalX { condition, .. } => w.condition = Some(condition),
            Instruction::Delay { duration, .. } => w.duration = Some(duration),
            Instruction::X { .. } | Instruction::H { .. } => {}
        }
        w
    }
}

impl TryFrom<WireInstruction> for Instruction {
    type Error = CircuitError;

    fn try_from(w: WireInstruction) -> Result<Self, Self::Error> {
        let kind = w.kind;
        let bad = |msg: &str| CircuitError::Malformed(format!("{kind:?}: {msg}"));
        let one = |q: &[usize]| -> Result<usize, CircuitError> {
            match q {
                [x] => Ok(*x),
                _ => Err(bad("expects exactly one qubit")),
            }
        };
        if w.condition.is_some() && kind != InstructionKind::ConditionalX {
            return Err(bad("only conditional_x carries a condition"));
        }
        if w.clbit.is_some() && kind != InstructionKind::Measure {
            return Err(bad("only measure writes a clbit"));
        }
        if w.duration.is_some() && kind != InstructionKind::Delay {
            return Err(bad("only delay has a duration"));
        }
        if w.theta.is_some() && !matches!(kind, InstructionKind::Ry | InstructionKind::Cry) {
            return Err(bad("only ry/cry take an angle"));
        }
        let theta = || w.theta.ok_or_else(|| bad("missing theta"));
        Ok(match kind {
            InstructionKind::X => Instruction::X { qubit: one(&w.qubits)? },
            InstructionKind::H => Instruction::H { qubit: one(&w.qubits)? },
            InstructionKind::Ry => Instruction::Ry {
                qubit: one(&w.qubits)?,
                theta: theta()?,
            },
            InstructionKind::Cry => match w.qubits[..] {
                [control, target] => Instruction::Cry {
                    control,
                    target,
                    theta: theta()?,
                },
                _ => return Err(bad("expects [control, target]")),
            },
            InstructionKind::Measure => Instruction::Measure {
                qubit: one(&w.qubits)?,
                clbit: w.clbit.ok_or_else(|| bad("missing clbit"))?,
            },
            InstructionKind::ConditionalX => Instruction::ConditionalX {
                qubit: one(&w.qubits)?,
                condition: w.condition.ok_or_else(|| bad("missing condition"))?,
            },
            InstructionKind::Delay => Instruction::Delay {
                qubits: w.qubits,
                duration: w.duration.ok_or_else(|| bad("missing duration"))?,
            },
        })
    }
}

/// Ordered instruction list over `num_qubits` qubits and `num_clbits` bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub num_clbits: usize,
    pub instructions: Vec<Instruction>,
    #[serde(default)]
    pub qubit_roles: BTreeMap<usize, QubitRole>,
}

#[derive(Serialize, Deserialize)]
struct CircuitDocument {
    version: u32,
    num_qubits: usize,
    num_clbits: usize,
    #[serde(default)]
    qubit_roles: BTreeMap<usize, QubitRole>,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Circuit {
            num_qubits,
            num_clbits,
            instructions: Vec::new(),
            qubit_roles: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, ins: Instruction) -> &mut Self {
        self.instructions.push(ins);
        self
    }

    pub fn x(&mut self, qubit: usize) -> &mut Self {
        self.push(Instruction::X { qubit })
    }

    pub fn h(&mut self, qubit: usize) -> &mut Self {
        self.push(Instruction::H { qubit })
    }

    pub fn ry(&mut self, qubit: usize, theta: f64) -> &mut Self {
        self.push(Instruction::Ry { qubit, theta })
    }

    pub fn cry(&mut self, control: usize, target: usize, theta: f64) -> &mut Self {
        self.push(Instruction::Cry {
            control,
            target,
            theta,
        })
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> &mut Self {
        self.push(Instruction::Measure { qubit, clbit })
    }

    pub fn conditional_x(&mut self, qubit: usize, clbit: usize, value: u8) -> &mut Self {
        self.push(Instruction::ConditionalX {
            qubit,
            condition: Condition { clbit, value },
        })
    }

    pub fn delay(&mut self, qubits: Vec<usize>, duration: f64) -> &mut Self {
        self.push(Instruction::Delay { qubits, duration })
    }

    /// Physical qubit carrying `role`, if assigned.
    pub fn qubit_with_role(&self, role: QubitRole) -> Option<usize> {
        self.qubit_roles
            .iter()
            .find_map(|(&q, &r)| (r == role).then_some(q))
    }

    /// JSON document `{version, num_qubits, num_clbits, qubit_roles, instructions}`.
    pub fn to_json(&self) -> String {
        let doc = CircuitDocument {
            version: CIRCUIT_FORMAT_VERSION,
            num_qubits: self.num_qubits,
            num_clbits: self.num_clbits,
            qubit_roles: self.qubit_roles.clone(),
            instructions: self.instructions.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("circuit serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CircuitError> {
        let doc: CircuitDocument =
            serde_json::from_str(text).map_err(|e| CircuitError::Malformed(e.to_string()))?;
        if doc.version != CIRCUIT_FORMAT_VERSION {
            return Err(CircuitError::Malformed(format!(
                "unsupported circuit format version {}",
                doc.version
            )));
        }
        Ok(Circuit {
            num_qubits: doc.num_qubits,
            num_clbits: doc.num_clbits,
            instructions: doc.instructions,
            qubit_roles: doc.qubit_roles,
        })
    }
}
