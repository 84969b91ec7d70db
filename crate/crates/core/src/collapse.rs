// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Phenomenological objective-reduction channel: coherence of a
//! gravity-coupled qubit decays as `e^{-t/τ}`, both as a deterministic
//! channel and as its Poisson-jump unravelling.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::gravity::OrSettings;
use crate::qmath::{dephase, ComplexMatrix, DensityMatrix, QmathError};
use crate::rng::{derive_seed, rng_from_seed, SimRng};

/// Surviving coherence fraction `e^{-t/τ}`; `1` when `τ = ∞`.
pub fn or_factor(t: f64, tau: f64) -> f64 {
    if tau.is_infinite() {
        1.0
    } else {
        (-t / tau).exp()
    }
}

/// Multiplies the coherences of `qubit` by `or_factor(t, settings.tau)`.
pub fn apply_or(
    rho: &DensityMatrix,
    qubit: usize,
    t: f64,
    settings: &OrSettings,
) -> Result<DensityMatrix, QmathError> {
    if t.is_nan() || t < 0.0 {
        return Err(QmathError::NegativeDuration(t));
    }
    dephase(rho, qubit, or_factor(t, settings.tau))
}

/// Jump times of a rate-`1/τ` Poisson process on `[0, t]`.
pub fn sample_collapse_events(t: f64, tau: f64, seed: u64) -> Vec<f64> {
    poisson_events(t, tau, &mut rng_from_seed(seed))
}

fn poisson_events(t: f64, tau: f64, rng: &mut SimRng) -> Vec<f64> {
    let mut events = Vec::new();
    if tau.is_nan() || tau <= 0.0 || tau.is_infinite() {
        return events;
    }
    let gap = Exp::new(1.0 / tau).expect("rate is positive and finite");
    let mut clock = 0.0;
    loop {
        clock += gap.sample(rng);
        if clock > t {
            return events;
        }
        events.push(clock);
    }
}

/// Outcome of a batch of single-qubit collapse trajectories.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryEnsemble {
    pub trajectories: u64,
    /// Trajectories with at least one collapse event.
    pub collapsed: u64,
    /// Trajectories projected onto `|0⟩` by their first event.
    pub projected_zero: u64,
    /// Ensemble-averaged final state.
    pub mean_state: DensityMatrix,
}

/// Runs `n` trajectories of the unravelled channel on a single-qubit state.
///
/// A trajectory with any event in `[0, t]` ends in `|k⟩⟨k|` with `k` drawn
/// from the Born rule; otherwise the state is untouched. Trajectory `i`
/// uses seed `derive_seed(seed, i)`.
pub fn run_trajectories(
    rho: &DensityMatrix,
    t: f64,
    tau: f64,
    n: u64,
    seed: u64,
) -> Result<TrajectoryEnsemble, QmathError> {
    if rho.num_qubits() != 1 {
        return Err(QmathError::DimensionMismatch {
            expected: 2,
            actual: rho.dim(),
        });
    }
    if t.is_nan() || t < 0.0 {
        return Err(QmathError::NegativeDuration(t));
    }
    let p0 = rho.get(0, 0).re.clamp(0.0, 1.0);
    let outcomes: Vec<Option<u8>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(seed, i));
            if poisson_events(t, tau, &mut rng).is_empty() {
                None
            } else {
                Some(u8::from(rng.random::<f64>() >= p0))
            }
        })
        .collect();
    let collapsed = outcomes.iter().filter(|o| o.is_some()).count() as u64;
    let projected_zero = outcomes.iter().filter(|o| **o == Some(0)).count() as u64;
    let projected_one = collapsed - projected_zero;
    let total = n.max(1) as f64;
    let untouched = (n - collapsed) as f64 / total;
    let z = projected_zero as f64 / total;
    let o = projected_one as f64 / total;
    let m = rho.matrix();
    let mean = ComplexMatrix::from_row_major(&[
        m.get(0, 0) * untouched + z,
        m.get(0, 1) * untouched,
        m.get(1, 0) * untouched,
        m.get(1, 1) * untouched + o,
    ]);
    Ok(TrajectoryEnsemble {
        trajectories: n,
        collapsed,
        projected_zero,
        mean_state: DensityMatrix::new(mean)?,
    })
}
