// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Circuit representation, exact branching evolution, shot sampling and
//! OpenQASM 3 export.

mod evolve;
mod instruction;
mod qasm;
mod sample;
mod validate;

use thiserror::Error;

use crate::qmath::QmathError;

pub use evolve::{
    clbit_probability, evolve_exact, qubit_marginal, record_distribution, BranchState,
    EvolveOptions, NoiseModel, BRANCH_PRUNE,
};
pub use instruction::{
    Circuit, Condition, Instruction, InstructionKind, QubitRole, CIRCUIT_FORMAT_VERSION,
};
pub use qasm::export_qasm3;
pub use sample::{sample_distribution, sample_shots, SIMULATOR_BACKEND};
pub use validate::{validate, Violation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("malformed circuit document: {0}")]
    Malformed(String),
    #[error("invalid circuit: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("coherence injection: {0}")]
    Injection(String),
    #[error("shot count must be positive")]
    NoShots,
    #[error(transparent)]
    Qmath(#[from] QmathError),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
