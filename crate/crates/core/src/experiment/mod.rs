// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! The two-arm protocol: circuit construction, staged prediction, count
//! statistics, collapse-time fitting, simulated runs and reports.

mod fit;
mod predict;
mod protocol;
mod report;
mod run;
mod stats;

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::counts::CountsError;

pub use fit::{fit_tau, fit_tau_from_stats, TauFit};
pub use predict::{predict, Outcome, Prediction, PredictionStage, STAGES};
pub use protocol::{
    build_protocol, FinalReadout, Layout, ProtocolParams, CLBIT_CONTROL, CLBIT_CONTROL_RECORD,
    CLBIT_RECORD, CLBIT_TEST, PROTOCOL_CLBITS, PROTOCOL_QUBITS,
};
pub use report::{
    emit_report, parse_report_csv, report_csv, report_markdown, report_svg, ReportFormat,
};
pub use run::{exact_arm_probabilities, run_experiment, ExperimentRun};
pub use stats::{
    analyze_counts, analyze_proportions, chi_square_test, compare_arms, infer_shots, two_sided_p,
    AnalysisReport, ArmStats,
};

/// Default shots per arm for replication runs.
pub const REPLICATION_SHOTS: u64 = 2590;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Counts(#[from] CountsError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
