// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Standard gate matrices. Two-qubit gates use the first qubit as the more
//! significant tensor factor (control ⊗ target).

use std::f64::consts::FRAC_1_SQRT_2;

use super::matrix::ComplexMatrix;

pub fn gate_x() -> ComplexMatrix {
    ComplexMatrix::from_real(&[0.0, 1.0, 1.0, 0.0])
}

pub fn gate_h() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    ComplexMatrix::from_real(&[s, s, s, -s])
}

/// `RY(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
pub fn gate_ry(theta: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_real(&[c, -s, s, c])
}

/// Controlled RY: identity on the `|0⟩` control block, `RY(θ)` on `|1⟩`.
pub fn gate_cry(theta: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    #[rustfmt::skip]
    let m = [
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, c,   -s,
        0.0, 0.0, s,   c,
    ];
    ComplexMatrix::from_real(&m)
}
