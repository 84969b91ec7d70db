// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra, qubit states, gates and noise channels.

mod channels;
mod density;
mod gates;
mod matrix;
mod ops;

use thiserror::Error;

pub use channels::{
    amplitude_damp, amplitude_damping_kraus, dephase, idle, phase_damp, phase_damping_kraus,
    ChannelMode, NoiseParams,
};
pub use density::{partial_trace, DensityMatrix, HERMITIAN_TOL, PSD_TOL, TRACE_TOL};
pub use gates::{gate_cry, gate_h, gate_ry, gate_x};
pub use matrix::{tensor, ComplexMatrix, DEFAULT_TOL};
pub use ops::{apply_gate, apply_kraus, apply_unitary, measure_probs, UNITARY_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmathError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("qubit {index} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit {0} listed twice")]
    DuplicateQubit(usize),
    #[error("negative duration {0} us")]
    NegativeDuration(f64),
    #[error("invalid noise parameters: {0}")]
    InvalidNoise(String),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
}
