// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! T1/T2 decoherence channels.
//!
//! Two modes exist. [`ChannelMode::Paper`] applies the textbook decay
//! arithmetic literally: populations relax with `e^(−t/T1)` and coherences
//! decay with `e^(−t/T2)`, each step touching only its own entries. On its
//! own the paper-mode amplitude step is not completely positive (it relaxes
//! populations without shrinking coherences), but followed by the paper-mode
//! phase step with `T2 ≤ 2·T1` the composite stays positive.
//! [`ChannelMode::Kraus`] uses the physical amplitude-damping Kraus pair and a
//! pure-dephasing pair whose rate `1/T_φ = 1/T2 − 1/(2·T1)` makes the total
//! coherence factor `e^(−t/T2)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::matrix::ComplexMatrix;
use super::ops::apply_kraus;
use super::QmathError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelMode {
    #[default]
    Paper,
    Kraus,
}

/// Relaxation times of one qubit, in microseconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNoise")]
pub struct NoiseParams {
    pub t1: f64,
    pub t2: f64,
}

#[derive(Deserialize)]
struct RawNoise {
    t1: f64,
    t2: f64,
}

impl TryFrom<RawNoise> for NoiseParams {
    type Error = QmathError;

    fn try_from(raw: RawNoise) -> Result<Self, Self::Error> {
        NoiseParams::new(raw.t1, raw.t2)
    }
}

impl NoiseParams {
    pub fn new(t1: f64, t2: f64) -> Result<Self, QmathError> {
        if !(t1 > 0.0 && t1.is_finite()) {
            return Err(QmathError::InvalidNoise(format!("t1 must be positive, got {t1}")));
        }
        if !(t2 > 0.0 && t2.is_finite()) {
            return Err(QmathError::InvalidNoise(format!("t2 must be positive, got {t2}")));
        }
        if t2 > 2.0 * t1 {
            return Err(QmathError::InvalidNoise(format!(
                "t2 = {t2} exceeds 2*t1 = {}",
                2.0 * t1
            )));
        }
        Ok(NoiseParams { t1, t2 })
    }

    /// Pure-dephasing rate `1/T2 − 1/(2·T1)` in 1/μs; zero when `T2 = 2·T1`.
    pub fn pure_dephasing_rate(&self) -> f64 {
        (1.0 / self.t2 - 1.0 / (2.0 * self.t1)).max(0.0)
    }
}

fn check_duration(t: f64) -> Result<(), QmathError> {
    if t.is_nan() || t < 0.0 {
        return Err(QmathError::NegativeDuration(t));
    }
    Ok(())
}

/// Amplitude-damping Kraus pair for decay probability `gamma`.
pub fn amplitude_damping_kraus(gamma: f64) -> [ComplexMatrix; 2] {
    [
        ComplexMatrix::from_real(&[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()]),
        ComplexMatrix::from_real(&[0.0, gamma.sqrt(), 0.0, 0.0]),
    ]
}

/// Phase-damping Kraus pair; coherences are multiplied by `sqrt(1 − lambda)`.
pub fn phase_damping_kraus(lambda: f64) -> [ComplexMatrix; 2] {
    [
        ComplexMatrix::from_real(&[1.0, 0.0, 0.0, (1.0 - lambda).sqrt()]),
        ComplexMatrix::from_real(&[0.0, 0.0, 0.0, lambda.sqrt()]),
    ]
}

/// Energy relaxation of `qubit` for `t` μs.
pub fn amplitude_damp(
    rho: &DensityMatrix,
    qubit: usize,
    t: f64,
    t1: f64,
    mode: ChannelMode,
) -> Result<DensityMatrix, QmathError> {
    check_duration(t)?;
    if t1.is_nan() || t1 <= 0.0 {
        return Err(QmathError::InvalidNoise(format!("t1 must be positive, got {t1}")));
    }
    rho.check_qubit(qubit)?;
    let survive = (-t / t1).exp();
    match mode {
        ChannelMode::Kraus => apply_kraus(rho, &amplitude_damping_kraus(1.0 - survive), &[qubit]),
        ChannelMode::Paper => Ok(relax_populations(rho, qubit, survive)),
    }
}

/// Dephasing of `qubit` for `t` μs.
///
/// Kraus mode needs the companion `t1` to split off the part of `T2` already
/// produced by amplitude damping.
pub fn phase_damp(
    rho: &DensityMatrix,
    qubit: usize,
    t: f64,
    t2: f64,
    mode: ChannelMode,
    companion_t1: Option<f64>,
) -> Result<DensityMatrix, QmathError> {
    check_duration(t)?;
    if t2.is_nan() || t2 <= 0.0 {
        return Err(QmathError::InvalidNoise(format!("t2 must be positive, got {t2}")));
    }
    rho.check_qubit(qubit)?;
    match mode {
        ChannelMode::Paper => dephase(rho, qubit, (-t / t2).exp()),
        ChannelMode::Kraus => {
            let t1 = companion_t1.ok_or_else(|| {
                QmathError::InvalidNoise("kraus-mode phase damping needs t1".into())
            })?;
            let rate = NoiseParams::new(t1, t2)?.pure_dephasing_rate();
            let factor = (-t * rate).exp();
            apply_kraus(rho, &phase_damping_kraus(1.0 - factor * factor), &[qubit])
        }
    }
}

/// Amplitude then phase damping of `qubit` for an idle period of `t` μs.
pub fn idle(
    rho: &DensityMatrix,
    qubit: usize,
    t: f64,
    noise: &NoiseParams,
    mode: ChannelMode,
) -> Result<DensityMatrix, QmathError> {
    let rho = amplitude_damp(rho, qubit, t, noise.t1, mode)?;
    phase_damp(&rho, qubit, t, noise.t2, mode, Some(noise.t1))
}

/// Multiplies every coherence between `|0⟩` and `|1⟩` of `qubit` by `factor`.
///
/// For `factor ∈ [0, 1]` this is a CPTP dephasing channel.
pub fn dephase(rho: &DensityMatrix, qubit: usize, factor: f64) -> Result<DensityMatrix, QmathError> {
    rho.check_qubit(qubit)?;
    if !(0.0..=1.0).contains(&factor) {
        return Err(QmathError::InvalidNoise(format!(
            "dephasing factor {factor} outside [0, 1]"
        )));
    }
    let shift = rho.num_qubits() - 1 - qubit;
    let f = Complex64::new(factor, 0.0);
    let m = ComplexMatrix::from_fn(rho.dim(), |i, j| {
        let v = rho.get(i, j);
        if (i >> shift) & 1 != (j >> shift) & 1 {
            v * f
        } else {
            v
        }
    });
    Ok(DensityMatrix::from_trusted(m))
}

/// Moves `1 − survive` of the `|1⟩` block of `qubit` into the `|0⟩` block and
/// leaves cross terms alone.
fn relax_populations(rho: &DensityMatrix, qubit: usize, survive: f64) -> DensityMatrix {
    let shift = rho.num_qubits() - 1 - qubit;
    let bit = 1usize << shift;
    let dim = rho.dim();
    let mut m = rho.matrix().clone();
    let lost = Complex64::new(1.0 - survive, 0.0);
    let kept = Complex64::new(survive, 0.0);
    for i in (0..dim).filter(|i| i & bit != 0) {
        for j in (0..dim).filter(|j| j & bit != 0) {
            let v = rho.get(i, j);
            m.set(i, j, v * kept);
            let (i0, j0) = (i & !bit, j & !bit);
            m.set(i0, j0, m.get(i0, j0) + v * lost);
        }
    }
    DensityMatrix::from_trusted(m)
}
