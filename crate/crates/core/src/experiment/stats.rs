// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

use super::fit::TauFit;
use super::ExperimentError;
use crate::counts::CountData;

/// Proportion of `"1"` outcomes in one arm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArmStats {
    pub shots: u64,
    pub p_one: f64,
    /// Binomial standard error of `p_one`.
    pub se: f64,
    /// `|p_one − ½|`, which does not depend on the outcome labelling.
    pub distance_from_uniform: f64,
}

impl ArmStats {
    /// `se = √(p(1−p)/n)`; for `p ∈ {0, 1}` the variance uses `p` clamped to
    /// `[½n⁻¹, 1 − ½n⁻¹]` so the error stays positive.
    pub fn from_proportion(p_one: f64, shots: u64) -> Result<Self, ExperimentError> {
        if shots == 0 {
            return Err(ExperimentError::Invalid("arm has zero shots".into()));
        }
        if !(0.0..=1.0).contains(&p_one) {
            return Err(ExperimentError::Invalid(format!(
                "proportion {p_one} outside [0, 1]"
            )));
        }
        let n = shots as f64;
        let floor = 0.5 / n;
        let pv = p_one.clamp(floor, 1.0 - floor);
        Ok(ArmStats {
            shots,
            p_one,
            se: (pv * (1.0 - pv) / n).sqrt(),
            distance_from_uniform: (p_one - 0.5).abs(),
        })
    }

    /// Stats of single-bit counts (`"0"`/`"1"` keys).
    pub fn from_counts(data: &CountData) -> Result<Self, ExperimentError> {
        data.validate()?;
        if data.shots == 0 {
            return Err(ExperimentError::Invalid("arm has zero shots".into()));
        }
        if data.width() != Some(1) {
            return Err(ExperimentError::Invalid(format!(
                "expected single-bit outcomes, found width {}",
                data.width().unwrap_or(0)
            )));
        }
        ArmStats::from_proportion(data.count("1") as f64 / data.shots as f64, data.shots)
    }
}

/// Two-arm comparison of the `"1"` proportions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub test: ArmStats,
    pub control: ArmStats,
    /// `p_test − p_control`.
    pub difference: f64,
    pub difference_se: f64,
    pub z: f64,
    /// Two-sided normal p-value.
    pub p_value: f64,
    pub fitted_tau: Option<TauFit>,
}

/// Two-sided tail probability `P(|Z| ≥ |z|)` of a standard normal.
pub fn two_sided_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// Builds the report from per-arm summaries.
pub fn compare_arms(test: ArmStats, control: ArmStats) -> AnalysisReport {
    let difference = test.p_one - control.p_one;
    let difference_se = (test.se.powi(2) + control.se.powi(2)).sqrt();
    let z = difference / difference_se;
    AnalysisReport {
        test,
        control,
        difference,
        difference_se,
        z,
        p_value: two_sided_p(z),
        fitted_tau: None,
    }
}

/// Two-proportion z-test on single-bit test/control counts.
pub fn analyze_counts(test: &CountData, control: &CountData) -> Result<AnalysisReport, ExperimentError> {
    Ok(compare_arms(ArmStats::from_counts(test)?, ArmStats::from_counts(control)?))
}

/// Same test from proportions and shot counts.
pub fn analyze_proportions(
    p_test: f64,
    n_test: u64,
    p_control: f64,
    n_control: u64,
) -> Result<AnalysisReport, ExperimentError> {
    Ok(compare_arms(
        ArmStats::from_proportion(p_test, n_test)?,
        ArmStats::from_proportion(p_control, n_control)?,
    ))
}

/// Shot count implied by a binomial standard error: `round(p(1−p)/se²)`.
pub fn infer_shots(p_hat: f64, se: f64) -> Result<u64, ExperimentError> {
    if !(p_hat > 0.0 && p_hat < 1.0) || !(se > 0.0 && se.is_finite()) {
        return Err(ExperimentError::Invalid(format!(
            "need 0 < p < 1 and se > 0, got p = {p_hat}, se = {se}"
        )));
    }
    Ok((p_hat * (1.0 - p_hat) / (se * se)).round() as u64)
}

/// Pearson chi-square goodness of fit; returns `(statistic, p-value)`.
/// Categories with zero expected probability must have zero observations.
pub fn chi_square_test(observed: &[u64], expected_probs: &[f64]) -> Result<(f64, f64), ExperimentError> {
    if observed.len() != expected_probs.len() {
        return Err(ExperimentError::Invalid("category counts differ".into()));
    }
    let n: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut dof = 0usize;
    for (&o, &p) in observed.iter().zip(expected_probs) {
        let e = p * n as f64;
        if e > 0.0 {
            stat += (o as f64 - e).powi(2) / e;
            dof += 1;
        } else if o > 0 {
            return Ok((f64::INFINITY, 0.0));
        }
    }
    if dof < 2 {
        return Ok((stat, 1.0));
    }
    let dist = ChiSquared::new((dof - 1) as f64).expect("positive degrees of freedom");
    Ok((stat, 1.0 - dist.cdf(stat)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts::ArmRole;
    use std::collections::BTreeMap;

    fn arm(ones: u64, shots: u64, role: ArmRole) -> CountData {
        let counts: BTreeMap<String, u64> =
            [("0".to_string(), shots - ones), ("1".to_string(), ones)].into_iter().collect();
        CountData::new(Some(role), counts, "fixture").unwrap()
    }

    #[test]
    fn hand_arithmetic_example() {
        let r = analyze_counts(&arm(50, 100, ArmRole::Test), &arm(60, 100, ArmRole::Control)).unwrap();
        assert!((r.difference + 0.10).abs() < 1e-12);
        assert!((r.difference_se - (0.0025f64 + 0.0024).sqrt()).abs() < 1e-12);
        assert!((r.z + 1.4286).abs() < 1e-3);
    }

    #[test]
    fn identical_arms() {
        let r = analyze_counts(&arm(30, 90, ArmRole::Test), &arm(30, 90, ArmRole::Control)).unwrap();
        assert_eq!(r.difference, 0.0);
        assert_eq!(r.z, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn arm_exchange_flips_sign() {
        let a = arm(1088, 2590, ArmRole::Test);
        let b = arm(858, 2610, ArmRole::Control);
        let ab = analyze_counts(&a, &b).unwrap();
        let ba = analyze_counts(&b, &a).unwrap();
        assert_eq!(ab.difference, -ba.difference);
        assert_eq!(ab.z, -ba.z);
        assert_eq!(ab.p_value, ba.p_value);
    }

    #[test]
    fn known_normal_tails() {
        let p = two_sided_p(1.959_963_984_540_054);
        assert!((p - 0.05).abs() < 1e-10, "{p}");
        assert_eq!(two_sided_p(0.0), 1.0);
    }

    #[test]
    fn degenerate_arm_keeps_positive_error() {
        let s = ArmStats::from_counts(&arm(0, 40, ArmRole::Test)).unwrap();
        assert_eq!(s.p_one, 0.0);
        assert!(s.se > 0.0);
    }

    #[test]
    fn rejects_wide_or_empty_counts() {
        let wide = CountData::new(None, [("01".to_string(), 4)].into_iter().collect(), "x").unwrap();
        assert!(ArmStats::from_counts(&wide).is_err());
        let empty = CountData::new(None, BTreeMap::new(), "x").unwrap();
        assert!(ArmStats::from_counts(&empty).is_err());
    }

    #[test]
    fn shots_from_standard_error() {
        assert_eq!(infer_shots(0.5, 0.05).unwrap(), 100);
        assert!(infer_shots(0.4201, 0.0097).unwrap().abs_diff(2590) <= 2);
        assert!(infer_shots(0.3287, 0.0092).unwrap().abs_diff(2610) <= 5);
        assert!(infer_shots(0.0, 0.01).is_err());
        assert!(infer_shots(0.3, 0.0).is_err());
    }

    #[test]
    fn chi_square_matches_reference_quantile() {
        // 95th percentile of chi-square with 1 dof is 3.841459
        let n = 10_000u64;
        let dev = (3.841_458_820_694_124f64 * 0.25 * n as f64).sqrt();
        let o0 = (n as f64 / 2.0 + dev).round() as u64;
        let (stat, p) = chi_square_test(&[o0, n - o0], &[0.5, 0.5]).unwrap();
        assert!((stat - 3.84).abs() < 0.01);
        assert!((p - 0.05).abs() < 0.002);
        assert_eq!(chi_square_test(&[1, 0], &[0.0, 1.0]).unwrap().1, 0.0);
    }
}
