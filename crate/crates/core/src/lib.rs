// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Density-matrix simulation of a weak-measurement / gravity-bit circuit,
//! Diósi-Penrose collapse times, a phenomenological objective-reduction
//! channel, and the two-arm count statistics used to compare them.

pub mod circuit;
pub mod collapse;
pub mod counts;
pub mod experiment;
pub mod gravity;
pub mod qmath;
pub mod rng;

pub use circuit::{
    evolve_exact, export_qasm3, sample_shots, validate, BranchState, Circuit, CircuitError,
    EvolveOptions, Instruction, NoiseModel, QubitRole,
};
pub use collapse::{apply_or, or_factor, run_trajectories, sample_collapse_events};
pub use counts::{ArmRole, Calibration, CountData, CountsError};
pub use experiment::{
    analyze_counts, build_protocol, fit_tau, predict, run_experiment, AnalysisReport,
    ExperimentError, ProtocolParams, TauFit,
};
pub use gravity::{
    collapse_time, fig1_table, self_energy_point, self_energy_quadrature, self_energy_spheres,
    Feasibility, GravityError, MassConfig, OrSettings,
};
pub use qmath::{ChannelMode, ComplexMatrix, DensityMatrix, NoiseParams, QmathError};

/// Formats `x` with `sig` significant digits in fixed or scientific notation.
///
/// Output is stable for golden files: fixed notation for magnitudes in
/// `[1e-4, 1e6)`, scientific otherwise, trailing zeros kept.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x == 0.0 {
        return format!("{:.*}", sig - 1, 0.0);
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&mag) {
        return format!("{:.*e}", sig - 1, x);
    }
    let decimals = (sig as i32 - 1 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new digit (9.999995 -> 10.00000)
    let rounded: f64 = s.parse().unwrap_or(x);
    let new_mag = rounded.abs().log10().floor() as i32;
    if new_mag != mag && rounded != 0.0 {
        let decimals = (sig as i32 - 1 - new_mag).max(0) as usize;
        return format!("{rounded:.decimals$}");
    }
    s
}
