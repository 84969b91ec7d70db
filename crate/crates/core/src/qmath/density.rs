// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::QmathError;

/// Hermiticity tolerance for a valid density matrix.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Trace tolerance for a valid density matrix.
pub const TRACE_TOL: f64 = 1e-9;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-9;

/// Unit-trace Hermitian positive-semidefinite matrix over `num_qubits` qubits.
///
/// Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
/// basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    num_qubits: usize,
}

impl DensityMatrix {
    /// Validates `mat` against every density-matrix invariant.
    pub fn new(mat: ComplexMatrix) -> Result<Self, QmathError> {
        let num_qubits = qubits_for_dim(mat.dim())?;
        let rho = DensityMatrix { mat, num_qubits };
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a matrix produced by a trusted operation without re-checking it.
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        let num_qubits = qubits_for_dim(mat.dim()).expect("trusted matrix has 2^n dimension");
        DensityMatrix { mat, num_qubits }
    }

    /// Single-qubit state from real entries `[[p0, c], [c, p1]]`.
    pub fn qubit_real(p0: f64, coherence: f64, p1: f64) -> Result<Self, QmathError> {
        Self::new(ComplexMatrix::from_real(&[p0, coherence, coherence, p1]))
    }

    /// Computational basis state `|index⟩⟨index|`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let dim = 1usize << num_qubits;
        assert!(index < dim, "basis index {index} out of range");
        let mut m = ComplexMatrix::zeros(dim);
        m.set(index, index, Complex64::new(1.0, 0.0));
        DensityMatrix { mat: m, num_qubits }
    }

    /// Pure state `|ψ⟩⟨ψ|`; the vector is normalised first.
    pub fn pure(state: &[Complex64]) -> Result<Self, QmathError> {
        let norm = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(QmathError::NotDensity("zero state vector".into()));
        }
        let psi: Vec<Complex64> = state.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&psi, &psi))
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let m = ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        DensityMatrix { mat: m, num_qubits }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat.get(row, col)
    }

    /// Checks Hermiticity, unit trace and positive semidefiniteness.
    pub fn validate(&self) -> Result<(), QmathError> {
        if !self.mat.is_hermitian(HERMITIAN_TOL) {
            return Err(QmathError::NotDensity("matrix is not Hermitian".into()));
        }
        let tr = self.mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QmathError::NotDensity(format!("trace is {tr}, expected 1")));
        }
        let min_ev = self.min_eigenvalue();
        if min_ev < -PSD_TOL {
            return Err(QmathError::NotDensity(format!(
                "negative eigenvalue {min_ev:e}"
            )));
        }
        Ok(())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat.hermitian_eigenvalues()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Off-diagonal element ⟨0|ρ|1⟩ of a single qubit.
    pub fn coherence(&self) -> Complex64 {
        assert_eq!(self.num_qubits, 1, "coherence is defined for one qubit");
        self.mat.get(0, 1)
    }

    /// Reduced state on the qubits in `keep`, in the order given.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix, QmathError> {
        for &q in keep {
            self.check_qubit(q)?;
        }
        let mut seen = vec![false; self.num_qubits];
        for &q in keep {
            if std::mem::replace(&mut seen[q], true) {
                return Err(QmathError::DuplicateQubit(q));
            }
        }
        if keep.is_empty() {
            return Err(QmathError::NotDensity("cannot reduce to zero qubits".into()));
        }
        let n = self.num_qubits;
        let traced: Vec<usize> = (0..n).filter(|q| !seen[*q]).collect();
        let keep_shifts: Vec<usize> = keep.iter().map(|&q| n - 1 - q).collect();
        let traced_shifts: Vec<usize> = traced.iter().map(|&q| n - 1 - q).collect();
        let kdim = 1usize << keep.len();
        let tdim = 1usize << traced.len();
        let mut out = DMatrix::<Complex64>::zeros(kdim, kdim);
        for a in 0..kdim {
            let ia = scatter(a, &keep_shifts);
            for b in 0..kdim {
                let ib = scatter(b, &keep_shifts);
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..tdim {
                    let off = scatter(e, &traced_shifts);
                    acc += self.mat.get(ia | off, ib | off);
                }
                out[(a, b)] = acc;
            }
        }
        Ok(DensityMatrix::from_trusted(ComplexMatrix::from_inner(out)))
    }

    /// Replaces the state of `qubit` by `sigma`, keeping the reduced state of
    /// every other qubit: `Tr_q(ρ)` with `σ` inserted at position `q`.
    pub fn replace_qubit(&self, qubit: usize, sigma: &DensityMatrix) -> Result<Self, QmathError> {
        self.check_qubit(qubit)?;
        if sigma.num_qubits != 1 {
            return Err(QmathError::DimensionMismatch {
                expected: 2,
                actual: sigma.dim(),
            });
        }
        let n = self.num_qubits;
        if n == 1 {
            return Ok(sigma.clone());
        }
        let rest: Vec<usize> = (0..n).filter(|&q| q != qubit).collect();
        let reduced = self.reduce(&rest)?;
        let shift = n - 1 - qubit;
        let rest_shifts: Vec<usize> = rest.iter().map(|&q| n - 1 - q).collect();
        let dim = self.dim();
        let mut out = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            let ri = gather(i, &rest_shifts);
            let si = (i >> shift) & 1;
            for j in 0..dim {
                let rj = gather(j, &rest_shifts);
                let sj = (j >> shift) & 1;
                out[(i, j)] = reduced.get(ri, rj) * sigma.get(si, sj);
            }
        }
        Ok(DensityMatrix::from_trusted(ComplexMatrix::from_inner(out)))
    }

    /// Probability that `qubit` reads `1` in the computational basis.
    pub fn prob_one(&self, qubit: usize) -> f64 {
        let shift = self.num_qubits - 1 - qubit;
        (0..self.dim())
            .filter(|i| (i >> shift) & 1 == 1)
            .map(|i| self.mat.get(i, i).re)
            .sum()
    }

    /// Projects `qubit` onto `|outcome⟩` and renormalises.
    ///
    /// Returns the Born probability alongside the post-measurement state, or
    /// `None` for the state when that probability is zero.
    pub fn project(&self, qubit: usize, outcome: u8) -> (f64, Option<DensityMatrix>) {
        let shift = self.num_qubits - 1 - qubit;
        let keep = |i: usize| ((i >> shift) & 1) as u8 == outcome;
        let dim = self.dim();
        let prob: f64 = (0..dim).filter(|&i| keep(i)).map(|i| self.mat.get(i, i).re).sum();
        let prob = prob.clamp(0.0, 1.0);
        if prob <= 0.0 {
            return (0.0, None);
        }
        let inv = 1.0 / prob;
        let m = ComplexMatrix::from_fn(dim, |i, j| {
            if keep(i) && keep(j) {
                self.mat.get(i, j) * inv
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        (prob, Some(DensityMatrix::from_trusted(m)))
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<(), QmathError> {
        if qubit >= self.num_qubits {
            Err(QmathError::QubitOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Probability-weighted sum of states with equal dimension.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix, QmathError> {
        let first = parts
            .first()
            .ok_or_else(|| QmathError::NotDensity("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
        for (p, rho) in parts {
            if rho.dim() != dim {
                return Err(QmathError::DimensionMismatch {
                    expected: dim,
                    actual: rho.dim(),
                });
            }
            acc += rho.mat.inner() * Complex64::new(*p, 0.0);
        }
        Ok(DensityMatrix::from_trusted(ComplexMatrix::from_inner(acc)))
    }
}

/// Single-qubit marginal of `rho` on qubit `keep`.
///
/// Any number of qubits is accepted; the common case is a two-qubit state
/// where this traces out the partner.
pub fn partial_trace(rho: &DensityMatrix, keep: usize) -> Result<DensityMatrix, QmathError> {
    rho.reduce(&[keep])
}

fn qubits_for_dim(dim: usize) -> Result<usize, QmathError> {
    if dim == 0 || !dim.is_power_of_two() || dim == 1 {
        return Err(QmathError::NotDensity(format!(
            "dimension {dim} is not 2^n for n >= 1"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Spreads the bits of `value` onto the given bit positions (first entry is
/// the most significant bit of `value`).
pub(crate) fn scatter(value: usize, shifts: &[usize]) -> usize {
    let k = shifts.len();
    shifts
        .iter()
        .enumerate()
        .fold(0, |acc, (p, &s)| acc | (((value >> (k - 1 - p)) & 1) << s))
}

/// Inverse of [`scatter`].
pub(crate) fn gather(index: usize, shifts: &[usize]) -> usize {
    shifts.iter().fold(0, |acc, &s| (acc << 1) | ((index >> s) & 1))
}
