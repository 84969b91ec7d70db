// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Absolute tolerance used by [`ComplexMatrix::approx_eq`] when callers do
/// not supply their own.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Dense square matrix of complex amplitudes.
///
/// Gates, Kraus operators and density matrices all sit on top of this type.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        ComplexMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    /// Builds a matrix from row-major complex entries.
    ///
    /// Panics if `entries.len()` is not a non-zero perfect square.
    pub fn from_row_major(entries: &[Complex64]) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        assert!(
            dim >= 1 && dim * dim == entries.len(),
            "{} entries do not form a square matrix",
            entries.len()
        );
        ComplexMatrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds a matrix from row-major real entries.
    pub fn from_real(entries: &[f64]) -> Self {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_major(&c)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        ComplexMatrix(DMatrix::from_fn(dim, dim, f))
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Self {
        assert_eq!(a.len(), b.len(), "outer product of unequal vectors");
        Self::from_fn(a.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.0[(row, col)] = value;
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub(crate) fn from_inner(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.is_square());
        ComplexMatrix(m)
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix(&self.0 * factor)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in add");
        ComplexMatrix(&self.0 + &other.0)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Kronecker product; `self` is the left (more significant) factor.
    pub fn tensor(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    /// Largest entry-wise absolute difference.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.adjoint() * self;
        prod.approx_eq(&ComplexMatrix::identity(self.dim()), tol)
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        ComplexMatrix((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .hermitian_part()
            .0
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.tensor(b)
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in product");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul<&ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        &self * rhs
    }
}

impl fmt::Display for ComplexMatrix {
    /// Prints real parts only when every imaginary part is negligible.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let real = self.0.iter().all(|z| z.im.abs() < 1e-12);
        for r in 0..self.dim() {
            write!(f, "[")?;
            for c in 0..self.dim() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                let z = self.get(r, c);
                if real {
                    write!(f, "{}", crate::fmt_sig(z.re, 6))?;
                } else {
                    write!(f, "{}{:+}i", crate::fmt_sig(z.re, 6), crate::fmt_sig(z.im, 6))?;
                }
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
