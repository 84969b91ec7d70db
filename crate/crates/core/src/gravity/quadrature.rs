// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Grid quadrature of `G ∫∫ ρ(x)ρ'(y)/|x−y| d³x d³y`.

use rayon::prelude::*;

use super::{GravityError, G};

/// `∫∫ 1/|x−y|` over the unit cube, times the cube volume squared.
/// A cell of mass `m` and side `a` contributes `C·m²/a` to the pair sum.
pub const CUBE_SELF_ENERGY: f64 = 1.882_312_644_389_660_5;

/// Sub-samples per axis used to estimate the fraction of a cell inside a sphere.
pub const SPHERE_SUBSAMPLES: usize = 4;

/// Mass density (kg/m³) sampled on a regular `nx × ny × nz` grid, x fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid3 {
    shape: [usize; 3],
    data: Vec<f64>,
}

impl Grid3 {
    pub fn zeros(shape: [usize; 3]) -> Self {
        Grid3 {
            shape,
            data: vec![0.0; shape[0] * shape[1] * shape[2]],
        }
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.shape[0] * (j + self.shape[1] * k)
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let idx = self.index(i, j, k);
        self.data[idx] = value;
    }

    /// Total mass for cells of side `cell`.
    pub fn mass(&self, cell: f64) -> f64 {
        self.data.iter().sum::<f64>() * cell.powi(3)
    }

    fn coords(&self, idx: usize) -> [f64; 3] {
        let i = idx % self.shape[0];
        let j = (idx / self.shape[0]) % self.shape[1];
        let k = idx / (self.shape[0] * self.shape[1]);
        [i as f64, j as f64, k as f64]
    }

    fn check(&self) -> Result<(), GravityError> {
        if self.data.is_empty() {
            return Err(GravityError::EmptyGrid);
        }
        if self.data.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(GravityError::NegativeDensity);
        }
        Ok(())
    }
}

/// Self-energy of the superposition of `a` and `b`: the pair sum of the
/// difference density `a − b` with itself.
pub fn self_energy_quadrature(a: &Grid3, b: &Grid3, cell: f64) -> Result<f64, GravityError> {
    check_pair(a, b, cell)?;
    let (ma, mb) = (a.mass(cell), b.mass(cell));
    if (ma - mb).abs() > 1e-3 * ma.max(mb) {
        return Err(GravityError::MassMismatch(ma, mb));
    }
    let vol = cell.powi(3);
    let cells: Vec<([f64; 3], f64)> = a
        .data
        .iter()
        .zip(&b.data)
        .enumerate()
        .filter(|(_, (x, y))| x != y)
        .map(|(idx, (x, y))| (a.coords(idx), (x - y) * vol))
        .collect();
    Ok(G * pair_sum(&cells, &cells, cell))
}

/// Mutual energy `G ∫∫ a(x)b(y)/|x−y|` of two distributions.
pub fn interaction_energy_quadrature(a: &Grid3, b: &Grid3, cell: f64) -> Result<f64, GravityError> {
    check_pair(a, b, cell)?;
    let vol = cell.powi(3);
    let occupied = |g: &Grid3| -> Vec<([f64; 3], f64)> {
        g.data
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(idx, v)| (g.coords(idx), v * vol))
            .collect()
    };
    Ok(G * pair_sum(&occupied(a), &occupied(b), cell))
}

fn check_pair(a: &Grid3, b: &Grid3, cell: f64) -> Result<(), GravityError> {
    if a.shape != b.shape {
        return Err(GravityError::ShapeMismatch(a.shape, b.shape));
    }
    if !(cell > 0.0 && cell.is_finite()) {
        return Err(GravityError::NonPositive("cell", cell));
    }
    a.check()?;
    b.check()?;
    if a.mass(cell) <= 0.0 || b.mass(cell) <= 0.0 {
        return Err(GravityError::EmptyGrid);
    }
    Ok(())
}

/// `Σ_i Σ_j m_i m'_j / r_ij` in grid units, divided by `cell`; coincident
/// cells use the uniform-cube self term. Rows are reduced in index order so
/// the result does not depend on thread scheduling.
fn pair_sum(left: &[([f64; 3], f64)], right: &[([f64; 3], f64)], cell: f64) -> f64 {
    let rows: Vec<f64> = left
        .par_iter()
        .map(|(p, m)| {
            let mut acc = 0.0;
            for (q, n) in right {
                let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2);
                acc += if d2 == 0.0 {
                    CUBE_SELF_ENERGY * n
                } else {
                    n / d2.sqrt()
                };
            }
            m * acc
        })
        .collect();
    rows.iter().sum::<f64>() / cell
}

/// Two uniform spheres of `radius` and mass `mass`, centres `separation`
/// apart along the body diagonal of an `n³` box of side
/// `2·radius + separation/√3`. Boundary cells carry their sub-sampled
/// covered fraction, and each grid is rescaled to exactly `mass`.
///
/// Returns `(a, b, cell)`.
pub fn displaced_spheres(
    radius: f64,
    separation: f64,
    mass: f64,
    n: usize,
) -> Result<(Grid3, Grid3, f64), GravityError> {
    for (name, x) in [("radius", radius), ("separation", separation), ("mass", mass)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(GravityError::NonPositive(name, x));
        }
    }
    if n == 0 {
        return Err(GravityError::EmptyGrid);
    }
    let shift = separation / 3f64.sqrt();
    let side = 2.0 * radius + shift;
    let cell = side / n as f64;
    let ca = [radius; 3];
    let cb = [radius + shift; 3];
    let a = sphere_grid(ca, radius, mass, n, cell);
    let b = sphere_grid(cb, radius, mass, n, cell);
    Ok((a, b, cell))
}

fn sphere_grid(centre: [f64; 3], radius: f64, mass: f64, n: usize, cell: f64) -> Grid3 {
    let mut g = Grid3::zeros([n, n, n]);
    let s = SPHERE_SUBSAMPLES;
    let r2 = radius * radius;
    let offsets: Vec<f64> = (0..s).map(|t| (t as f64 + 0.5) / s as f64).collect();
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let mut inside = 0usize;
                for oz in &offsets {
                    let z = (k as f64 + oz) * cell - centre[2];
                    for oy in &offsets {
                        let y = (j as f64 + oy) * cell - centre[1];
                        for ox in &offsets {
                            let x = (i as f64 + ox) * cell - centre[0];
                            if x * x + y * y + z * z <= r2 {
                                inside += 1;
                            }
                        }
                    }
                }
                g.set(i, j, k, inside as f64 / (s * s * s) as f64);
            }
        }
    }
    let covered: f64 = g.data.iter().sum();
    let density = mass / (covered * cell.powi(3));
    g.data.iter_mut().for_each(|v| *v *= density);
    g
}
