// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::stats::ArmStats;
use super::ExperimentError;
use crate::counts::CountData;

/// Collapse time inferred from the two arms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TauFit {
    /// `tau` and `se` in μs; `ratio` is the surviving coherence fraction.
    Finite {
        tau: f64,
        se: f64,
        ratio: f64,
        ratio_se: f64,
    },
    /// The test arm sits at (or beyond) the uniform distribution: `τ → 0`.
    CompleteCollapse,
    /// The test arm is no closer to uniform than the control arm: `τ = ∞`.
    NoSignal { ratio: f64 },
}

impl TauFit {
    /// Whether `tau_true` lies within `k` standard errors of the estimate.
    pub fn covers(&self, tau_true: f64, k: f64) -> bool {
        match *self {
            TauFit::Finite { tau, se, .. } => (tau - tau_true).abs() <= k * se,
            TauFit::CompleteCollapse => tau_true == 0.0,
            TauFit::NoSignal { .. } => tau_true.is_infinite(),
        }
    }
}

/// Solves `e^{-delay/τ} = (p_test − ½)/(p_control − ½)`, treating the
/// control arm as the `τ = ∞` baseline. The standard error follows from
/// first-order propagation of both arms' binomial errors.
pub fn fit_tau_from_stats(test: &ArmStats, control: &ArmStats, delay: f64) -> Result<TauFit, ExperimentError> {
    if !(delay > 0.0 && delay.is_finite()) {
        return Err(ExperimentError::Invalid(format!(
            "fitting needs a positive delay, got {delay}"
        )));
    }
    let dt = test.p_one - 0.5;
    let dc = control.p_one - 0.5;
    if dc == 0.0 {
        return Ok(TauFit::NoSignal { ratio: f64::NAN });
    }
    let ratio = dt / dc;
    if ratio >= 1.0 {
        return Ok(TauFit::NoSignal { ratio });
    }
    if ratio <= 0.0 {
        return Ok(TauFit::CompleteCollapse);
    }
    let ratio_se = ratio * ((test.se / dt).powi(2) + (control.se / dc).powi(2)).sqrt();
    let ln = ratio.ln();
    let tau = -delay / ln;
    let se = delay * ratio_se / (ratio * ln * ln);
    Ok(TauFit::Finite {
        tau,
        se,
        ratio,
        ratio_se,
    })
}

/// [`fit_tau_from_stats`] on single-bit counts.
pub fn fit_tau(test: &CountData, control: &CountData, delay: f64) -> Result<TauFit, ExperimentError> {
    fit_tau_from_stats(&ArmStats::from_counts(test)?, &ArmStats::from_counts(control)?, delay)
}
