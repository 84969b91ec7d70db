// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use rand::Rng;

use super::evolve::{evolve_exact, record_distribution, EvolveOptions};
use super::instruction::Circuit;
use super::CircuitError;
use crate::counts::CountData;
use crate::rng::rng_from_seed;

/// Backend label written into simulated count files.
pub const SIMULATOR_BACKEND: &str = "simulator";

/// Draws `n_shots` classical records from the exact record distribution.
///
/// The circuit is evolved once; shots are then categorical draws over the
/// lexicographically sorted records, so the output depends only on the
/// circuit, the options and `seed`.
pub fn sample_shots(
    circuit: &Circuit,
    opts: &EvolveOptions,
    n_shots: u64,
    seed: u64,
) -> Result<CountData, CircuitError> {
    if n_shots == 0 {
        return Err(CircuitError::NoShots);
    }
    if circuit.num_clbits == 0 {
        return Err(CircuitError::Malformed("circuit has no classical bits to sample".into()));
    }
    let branches = evolve_exact(circuit, opts)?;
    let dist = record_distribution(&branches);
    sample_distribution(&dist, n_shots, seed)
}

/// Categorical sampling over a precomputed outcome distribution.
pub fn sample_distribution(
    dist: &BTreeMap<String, f64>,
    n_shots: u64,
    seed: u64,
) -> Result<CountData, CircuitError> {
    if n_shots == 0 {
        return Err(CircuitError::NoShots);
    }
    if dist.is_empty() || dist.keys().any(|k| k.is_empty()) {
        return Err(CircuitError::Malformed("records must be non-empty bitstrings".into()));
    }
    let keys: Vec<&String> = dist.keys().collect();
    let mut cumulative = Vec::with_capacity(keys.len());
    let mut acc = 0.0;
    for p in dist.values() {
        acc += p;
        cumulative.push(acc);
    }
    let mut tallies = vec![0u64; keys.len()];
    let mut rng = rng_from_seed(seed);
    for _ in 0..n_shots {
        let u: f64 = rng.random::<f64>() * acc;
        let k = cumulative.partition_point(|&c| c <= u).min(keys.len() - 1);
        tallies[k] += 1;
    }
    let counts: BTreeMap<String, u64> = keys
        .into_iter()
        .zip(tallies)
        .filter(|(_, n)| *n > 0)
        .map(|(k, n)| (k.clone(), n))
        .collect();
    Ok(CountData::new(None, counts, SIMULATOR_BACKEND)
        .expect("tallies sum to the shot count"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuits_without_clbits_cannot_be_sampled() {
        let mut c = Circuit::new(1, 0);
        c.h(0);
        assert!(matches!(
            sample_shots(&c, &EvolveOptions::default(), 10, 0),
            Err(CircuitError::Malformed(_))
        ));
        assert!(sample_distribution(&BTreeMap::new(), 10, 0).is_err());
    }

    #[test]
    fn ground_state_gives_all_zeros() {
        let mut c = Circuit::new(1, 1);
        c.measure(0, 0);
        for seed in [0, 1, 99] {
            let d = sample_shots(&c, &EvolveOptions::default(), 500, seed).unwrap();
            assert_eq!(d.count("0"), 500);
        }
    }

    #[test]
    fn fair_coin_within_five_sigma() {
        let mut c = Circuit::new(1, 1);
        c.h(0).measure(0, 0);
        let n = 100_000;
        let d = sample_shots(&c, &EvolveOptions::default(), n, 7).unwrap();
        let f = d.count("1") as f64 / n as f64;
        assert!((f - 0.5).abs() < 5.0 * (0.25 / n as f64).sqrt());
    }

    #[test]
    fn same_seed_same_counts() {
        let mut c = Circuit::new(2, 2);
        c.h(0).ry(1, 0.7).measure(0, 0).measure(1, 1);
        let a = sample_shots(&c, &EvolveOptions::default(), 1000, 3).unwrap();
        let b = sample_shots(&c, &EvolveOptions::default(), 1000, 3).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn zero_shots_rejected() {
        let c = Circuit::new(1, 0);
        assert_eq!(
            sample_shots(&c, &EvolveOptions::default(), 0, 0),
            Err(CircuitError::NoShots)
        );
    }
}
