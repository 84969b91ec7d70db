// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use super::fit::fit_tau;
use super::protocol::{build_protocol, FinalReadout, ProtocolParams, CLBIT_CONTROL, CLBIT_TEST};
use super::stats::{analyze_counts, AnalysisReport};
use super::ExperimentError;
use crate::circuit::{clbit_probability, evolve_exact, record_distribution, sample_distribution};
use crate::counts::{ArmRole, CountData};
use crate::rng::derive_seed;

/// Pooled per-role counts and their analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRun {
    pub report: AnalysisReport,
    pub test: CountData,
    pub control: CountData,
}

/// Exact probability of reading `1` on the test and control arms.
pub fn exact_arm_probabilities(params: &ProtocolParams) -> Result<(f64, f64), ExperimentError> {
    let circuit = build_protocol(params)?;
    let branches = evolve_exact(&circuit, &params.evolve_options())?;
    Ok((
        clbit_probability(&branches, CLBIT_TEST),
        clbit_probability(&branches, CLBIT_CONTROL),
    ))
}

/// Simulates `n_shots` shots split over `repetitions`, alternating the
/// physical test/control assignment between repetitions, and pools counts
/// by role. Repetition `r` samples with `derive_seed(seed, r)`.
///
/// Both arms come from the same circuit: the test arm carries the collapse
/// channel, the control arm never does. A fit is attached when the protocol
/// has a positive delay.
pub fn run_experiment(
    params: &ProtocolParams,
    n_shots: u64,
    seed: u64,
    repetitions: u32,
) -> Result<ExperimentRun, ExperimentError> {
    if repetitions == 0 {
        return Err(ExperimentError::Invalid("repetitions must be at least 1".into()));
    }
    if params.readout != FinalReadout::Control {
        return Err(ExperimentError::Invalid(
            "two-arm runs need the control qubit on the final readout".into(),
        ));
    }
    if n_shots < u64::from(repetitions) {
        return Err(ExperimentError::Invalid(format!(
            "{n_shots} shots cannot be split over {repetitions} repetitions"
        )));
    }
    let reps = u64::from(repetitions);
    let batches: Vec<(CountData, CountData)> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let rep_params = ProtocolParams {
                swap_roles: params.swap_roles ^ (r % 2 == 1),
                ..params.clone()
            };
            let shots = n_shots / reps + u64::from(r < n_shots % reps);
            let circuit = build_protocol(&rep_params)?;
            let branches = evolve_exact(&circuit, &rep_params.evolve_options())?;
            let raw = sample_distribution(&record_distribution(&branches), shots, derive_seed(seed, r))?;
            Ok((
                raw.marginal(CLBIT_TEST, ArmRole::Test)?,
                raw.marginal(CLBIT_CONTROL, ArmRole::Control)?,
            ))
        })
        .collect::<Result<_, ExperimentError>>()?;

    let mut iter = batches.into_iter();
    let (mut test, mut control) = iter.next().expect("at least one repetition");
    for (t, c) in iter {
        test.merge(&t);
        control.merge(&c);
    }
    let mut report = analyze_counts(&test, &control)?;
    if params.delay > 0.0 {
        report.fitted_tau = Some(fit_tau(&test, &control, params.delay)?);
    }
    Ok(ExperimentRun {
        report,
        test,
        control,
    })
}
