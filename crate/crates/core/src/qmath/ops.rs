// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::{gather, scatter, DensityMatrix};
use super::matrix::ComplexMatrix;
use super::QmathError;

/// Unitarity tolerance accepted by [`apply_unitary`] and [`apply_gate`].
pub const UNITARY_TOL: f64 = 1e-9;

/// `UρU†` with a full-dimension unitary.
pub fn apply_unitary(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix, QmathError> {
    if u.dim() != rho.dim() {
        return Err(QmathError::DimensionMismatch {
            expected: rho.dim(),
            actual: u.dim(),
        });
    }
    check_unitary(u)?;
    let out = u * rho.matrix() * &u.adjoint();
    Ok(DensityMatrix::from_trusted(out))
}

/// `UρU†` where `u` acts on `targets` (first target is the most significant
/// factor of `u`) and identity elsewhere.
pub fn apply_gate(
    rho: &DensityMatrix,
    u: &ComplexMatrix,
    targets: &[usize],
) -> Result<DensityMatrix, QmathError> {
    check_targets(rho, u, targets)?;
    check_unitary(u)?;
    Ok(DensityMatrix::from_trusted(conjugate_local(rho, u, targets)))
}

/// Kraus channel `Σ K ρ K†` with every operator acting on `targets`.
/// Completeness of the operator set is the caller's responsibility.
pub fn apply_kraus(
    rho: &DensityMatrix,
    ops: &[ComplexMatrix],
    targets: &[usize],
) -> Result<DensityMatrix, QmathError> {
    let dim = rho.dim();
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for k in ops {
        check_targets(rho, k, targets)?;
        acc += conjugate_local(rho, k, targets).inner();
    }
    Ok(DensityMatrix::from_trusted(ComplexMatrix::from_inner(acc)))
}

/// Computational-basis probabilities: the real diagonal, clipped to [0, 1]
/// and renormalised.
pub fn measure_probs(rho: &DensityMatrix) -> Vec<f64> {
    let mut p: Vec<f64> = (0..rho.dim())
        .map(|i| rho.get(i, i).re.clamp(0.0, 1.0))
        .collect();
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        p.iter_mut().for_each(|x| *x /= total);
    }
    p
}

fn check_unitary(u: &ComplexMatrix) -> Result<(), QmathError> {
    let dev = (u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(u.dim()));
    if dev > UNITARY_TOL {
        return Err(QmathError::NotUnitary(dev));
    }
    Ok(())
}

fn check_targets(rho: &DensityMatrix, op: &ComplexMatrix, targets: &[usize]) -> Result<(), QmathError> {
    let expected = 1usize << targets.len();
    if op.dim() != expected {
        return Err(QmathError::DimensionMismatch {
            expected,
            actual: op.dim(),
        });
    }
    for (i, &t) in targets.iter().enumerate() {
        rho.check_qubit(t)?;
        if targets[..i].contains(&t) {
            return Err(QmathError::DuplicateQubit(t));
        }
    }
    Ok(())
}

/// `K ρ K†` for a local operator, by index arithmetic instead of embedding
/// `K` into the full space.
fn conjugate_local(rho: &DensityMatrix, k: &ComplexMatrix, targets: &[usize]) -> ComplexMatrix {
    let n = rho.num_qubits();
    let dim = rho.dim();
    let shifts: Vec<usize> = targets.iter().map(|&t| n - 1 - t).collect();
    let local = k.dim();
    let mask = scatter(local - 1, &shifts);
    let sub: Vec<usize> = (0..dim).map(|i| gather(i, &shifts)).collect();
    let base: Vec<usize> = (0..dim).map(|i| i & !mask).collect();
    let spread: Vec<usize> = (0..local).map(|a| scatter(a, &shifts)).collect();
    let m = rho.matrix().inner();
    let kk = k.inner();

    let mut left = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        let (a, b) = (sub[i], base[i]);
        for ap in 0..local {
            let coef = kk[(a, ap)];
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            let src = b | spread[ap];
            for j in 0..dim {
                left[(i, j)] += coef * m[(src, j)];
            }
        }
    }
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..dim {
        let (a, b) = (sub[j], base[j]);
        for ap in 0..local {
            let coef = kk[(a, ap)].conj();
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            let src = b | spread[ap];
            for i in 0..dim {
                out[(i, j)] += left[(i, src)] * coef;
            }
        }
    }
    ComplexMatrix::from_inner(out)
}
