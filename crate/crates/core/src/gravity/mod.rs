// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gravitational self-energy of superposed mass configurations and the
//! Diósi-Penrose collapse time `τ = γħ/E_G`.
//!
//! Energies are reported as magnitudes (`E_G > 0`).

mod quadrature;
mod table;

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use quadrature::{
    displaced_spheres, interaction_energy_quadrature, self_energy_quadrature, Grid3,
    CUBE_SELF_ENERGY, SPHERE_SUBSAMPLES,
};
pub use table::{fig1_table, format_duration, Feasibility, TableCell, TauTable, FIG1_BITS, FIG1_MASSES, FIG1_SEPARATION};

/// Newton's constant, m³ kg⁻¹ s⁻².
pub const G: f64 = 6.674e-11;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.0546e-34;
/// Penrose's original estimate of the prefactor in `τ = γħ/E_G`.
pub const PENROSE_GAMMA: f64 = 1.0 / (8.0 * PI);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GravityError {
    #[error("{0} must be positive and finite, got {1}")]
    NonPositive(&'static str, f64),
    #[error("closed form needs point geometry")]
    NotPoint,
    #[error("closed form needs sphere geometry")]
    NotSphere,
    #[error("spheres overlap (separation {separation} < 2 x radius {radius}); use the quadrature")]
    Overlapping { separation: f64, radius: f64 },
    #[error("grids differ in shape: {0:?} vs {1:?}")]
    ShapeMismatch([usize; 3], [usize; 3]),
    #[error("grid masses differ by more than 0.1%: {0} vs {1}")]
    MassMismatch(f64, f64),
    #[error("grid is empty or carries no mass")]
    EmptyGrid,
    #[error("grid density must be non-negative and finite")]
    NegativeDensity,
    #[error("collapse-time list is empty")]
    EmptyTable,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Point,
    Sphere { radius: f64 },
}

/// `n_bits` channels of `mass_per_bit` each, displaced by `separation`.
/// The channels add coherently, so the displaced mass is `n_bits·mass_per_bit`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassConfig {
    pub n_bits: u32,
    pub mass_per_bit: f64,
    pub separation: f64,
    pub geometry: Geometry,
}

impl MassConfig {
    pub fn point(n_bits: u32, mass_per_bit: f64, separation: f64) -> Self {
        MassConfig {
            n_bits,
            mass_per_bit,
            separation,
            geometry: Geometry::Point,
        }
    }

    pub fn sphere(n_bits: u32, mass_per_bit: f64, separation: f64, radius: f64) -> Self {
        MassConfig {
            n_bits,
            mass_per_bit,
            separation,
            geometry: Geometry::Sphere { radius },
        }
    }

    pub fn total_mass(&self) -> f64 {
        f64::from(self.n_bits) * self.mass_per_bit
    }

    pub fn validate(&self) -> Result<(), GravityError> {
        if self.n_bits == 0 {
            return Err(GravityError::NonPositive("n_bits", 0.0));
        }
        positive("mass_per_bit", self.mass_per_bit)?;
        positive("separation", self.separation)?;
        if let Geometry::Sphere { radius } = self.geometry {
            positive("radius", radius)?;
        }
        Ok(())
    }

    /// Self-energy for either geometry.
    pub fn self_energy(&self) -> Result<f64, GravityError> {
        match self.geometry {
            Geometry::Point => self_energy_point(self),
            Geometry::Sphere { .. } => self_energy_spheres(self),
        }
    }
}

fn positive(name: &'static str, x: f64) -> Result<(), GravityError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(GravityError::NonPositive(name, x))
    }
}

/// `G·M²/d` for two point masses.
pub fn self_energy_point(config: &MassConfig) -> Result<f64, GravityError> {
    config.validate()?;
    if config.geometry != Geometry::Point {
        return Err(GravityError::NotPoint);
    }
    let m = config.total_mass();
    Ok(G * m * m / config.separation)
}

/// `(12/5)·G·M²/R − 2·G·M²/d` for two uniform spheres of radius `R` whose
/// centres are `d ≥ 2R` apart.
pub fn self_energy_spheres(config: &MassConfig) -> Result<f64, GravityError> {
    config.validate()?;
    let Geometry::Sphere { radius } = config.geometry else {
        return Err(GravityError::NotSphere);
    };
    let d = config.separation;
    if d < 2.0 * radius {
        return Err(GravityError::Overlapping {
            separation: d,
            radius,
        });
    }
    let gm2 = G * config.total_mass().powi(2);
    Ok(2.4 * gm2 / radius - 2.0 * gm2 / d)
}

/// `τ = γħ/E_G` in seconds.
pub fn collapse_time(e_g: f64, gamma: f64) -> Result<f64, GravityError> {
    positive("energy", e_g)?;
    positive("gamma", gamma)?;
    Ok(gamma * HBAR / e_g)
}

/// Collapse channel parameters: `tau` in μs, and the qubits whose coherence
/// it suppresses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOr")]
pub struct OrSettings {
    pub tau: f64,
    pub gamma: f64,
    pub coupled_qubits: BTreeSet<usize>,
}

#[derive(Deserialize)]
struct RawOr {
    tau: f64,
    #[serde(default = "unit_gamma")]
    gamma: f64,
    #[serde(default)]
    coupled_qubits: BTreeSet<usize>,
}

fn unit_gamma() -> f64 {
    1.0
}

impl TryFrom<RawOr> for OrSettings {
    type Error = GravityError;

    fn try_from(raw: RawOr) -> Result<Self, Self::Error> {
        OrSettings::new(raw.tau, raw.gamma, raw.coupled_qubits)
    }
}

impl OrSettings {
    /// `tau` may be `+∞` (no collapse).
    pub fn new(
        tau: f64,
        gamma: f64,
        coupled_qubits: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GravityError> {
        if tau.is_nan() || tau <= 0.0 {
            return Err(GravityError::NonPositive("tau", tau));
        }
        positive("gamma", gamma)?;
        Ok(OrSettings {
            tau,
            gamma,
            coupled_qubits: coupled_qubits.into_iter().collect(),
        })
    }

    /// Settings whose `tau` comes from the self-energy of `config`.
    pub fn from_mass(
        config: &MassConfig,
        gamma: f64,
        coupled_qubits: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GravityError> {
        let seconds = collapse_time(config.self_energy()?, gamma)?;
        OrSettings::new(seconds * 1e6, gamma, coupled_qubits)
    }

    pub fn with_coupled(&self, coupled_qubits: impl IntoIterator<Item = usize>) -> Self {
        OrSettings {
            coupled_qubits: coupled_qubits.into_iter().collect(),
            ..self.clone()
        }
    }
}
