//! 2x2 complex matrices and qubit density matrices.

use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const STATE_EPS: f64 = 1e-12;

/// A general 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub const ZERO: Matrix2 = Matrix2([[Complex64::new(0.0, 0.0); 2]; 2]);

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Matrix2([
            [Complex64::new(m[0][0], 0.0), Complex64::new(m[0][1], 0.0)],
            [Complex64::new(m[1][0], 0.0), Complex64::new(m[1][1], 0.0)],
        ])
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Self::from_real([[a, 0.0], [0.0, b]])
    }

    pub fn pauli_z() -> Self {
        Self::diag(1.0, -1.0)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Matrix2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = &self.0;
        Matrix2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.0;
        let d = [
            m[0][0].im.abs(),
            m[1][1].im.abs(),
            (m[0][1] - m[1][0].conj()).norm(),
        ];
        d.iter().copied().fold(0.0, f64::max)
    }

    /// Eigenvalues `(low, high)` of a Hermitian matrix.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = self.0[0][1].norm();
        let mean = 0.5 * (a + d);
        let radius = libm::hypot(0.5 * (a - d), b);
        (mean - radius, mean + radius)
    }

    /// Singular values `(high, low)`.
    pub fn singular_values(&self) -> (f64, f64) {
        // Eigenvalues of A^dagger A.
        let g = self.adjoint() * *self;
        let (lo, hi) = g.hermitian_eigenvalues();
        (libm::sqrt(hi.max(0.0)), libm::sqrt(lo.max(0.0)))
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        Matrix2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        self + rhs.scale(-1.0)
    }
}

/// A qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState(Matrix2);

impl QubitState {
    /// Validates `m` against the density-matrix invariants (tolerance 1e-12).
    pub fn new(m: Matrix2) -> Result<Self> {
        if m.0
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidState("non-finite entry"));
        }
        if m.hermiticity_defect() > STATE_EPS {
            return Err(Error::InvalidState("not Hermitian"));
        }
        if (m.trace().re - 1.0).abs() > STATE_EPS {
            return Err(Error::InvalidState("trace is not one"));
        }
        if m.hermitian_eigenvalues().0 < -STATE_EPS {
            return Err(Error::InvalidState("negative eigenvalue"));
        }
        Ok(QubitState(m))
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(Matrix2::from_real(m))
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0.get(row, col)
    }

    /// `tr(rho^2)`, in `[1/2, 1]`.
    pub fn purity(&self) -> f64 {
        self.overlap(self)
    }

    /// `tr(self * other)`; real for Hermitian arguments.
    pub fn overlap(&self, other: &QubitState) -> f64 {
        (self.0 * other.0).trace().re
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        self.0.hermitian_eigenvalues()
    }

    /// l1-norm coherence squared, `(2 |rho_01|)^2`.
    pub fn coherence(&self) -> f64 {
        let c = 2.0 * self.0 .0[0][1].norm();
        c * c
    }

    pub(crate) fn from_trusted(m: Matrix2) -> Self {
        QubitState(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(QubitState::from_real([[0.5, 0.5], [0.5, 0.5]]).is_ok());
        assert!(QubitState::from_real([[0.6, 0.0], [0.0, 0.6]]).is_err());
        assert!(QubitState::from_real([[0.5, 0.6], [0.6, 0.5]]).is_err());
        let skew = Matrix2([
            [Complex64::new(0.5, 0.0), Complex64::new(0.1, 0.2)],
            [Complex64::new(0.1, 0.2), Complex64::new(0.5, 0.0)],
        ]);
        assert!(QubitState::new(skew).is_err());
    }

    #[test]
    fn purity_bounds() {
        let pure = QubitState::from_real([[0.5, 0.5], [0.5, 0.5]]).unwrap();
        let mixed = QubitState::from_real([[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-15);
        assert!((mixed.purity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn singular_values_of_symmetric_offdiagonal() {
        let m = Matrix2::from_real([[0.0, -0.3], [-0.3, 0.0]]);
        let (s1, s2) = m.singular_values();
        assert!((s1 - 0.3).abs() < 1e-15 && (s2 - 0.3).abs() < 1e-15);
    }
}
