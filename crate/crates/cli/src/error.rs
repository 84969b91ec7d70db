// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use orsim_core::experiment::ExperimentError;
use orsim_core::gravity::GravityError;
use orsim_core::{CircuitError, CountsError};

/// Command failure, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: config, flags or data files. Exit code 2.
    Validation(String),
    /// Failure while running a valid request. Exit code 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Io { .. } => CliError::Runtime(e.to_string()),
            ExperimentError::Counts(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<CountsError> for CliError {
    fn from(e: CountsError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<GravityError> for CliError {
    fn from(e: GravityError) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Writes `text` to `path`, mapping failures to runtime errors.
pub fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}
