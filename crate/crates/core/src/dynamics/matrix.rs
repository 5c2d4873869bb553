//! Minimal 2×2 complex matrix algebra for single-qubit operators.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const SIGMA_X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
    pub const SIGMA_Y: Mat2 = Mat2([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]]);
    pub const SIGMA_Z: Mat2 = Mat2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]);

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Mat2([
            [Complex64::new(m[0][0], 0.0), Complex64::new(m[0][1], 0.0)],
            [Complex64::new(m[1][0], 0.0), Complex64::new(m[1][1], 0.0)],
        ])
    }

    /// `|a⟩⟨b|` for real column vectors.
    pub fn outer(a: [f64; 2], b: [f64; 2]) -> Self {
        Self::from_real([[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]])
    }

    /// `(c0·I + c·σ)` for real coefficients.
    pub fn from_pauli(c0: f64, c: [f64; 3]) -> Self {
        Mat2::IDENTITY.scale(c0)
            + Mat2::SIGMA_X.scale(c[0])
            + Mat2::SIGMA_Y.scale(c[1])
            + Mat2::SIGMA_Z.scale(c[2])
    }

    /// Real Pauli coefficients `(c0, c)` with `M = c0·I + c·σ`; exact for Hermitian input.
    pub fn pauli_coefficients(&self) -> (f64, [f64; 3]) {
        let half = 0.5;
        (
            (self.trace()).re * half,
            [
                (*self * Mat2::SIGMA_X).trace().re * half,
                (*self * Mat2::SIGMA_Y).trace().re * half,
                (*self * Mat2::SIGMA_Z).trace().re * half,
            ],
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn scale_c(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.dagger()).frobenius_norm() <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let (c0, c) = self.pauli_coefficients();
        let r = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        [c0 - r, c0 + r]
    }

    /// Matrix logarithm of a Hermitian positive matrix through its eigendecomposition.
    ///
    /// Eigenvalues below `floor` are raised to `floor`; the flag reports whether that happened.
    pub fn hermitian_log(&self, floor: f64) -> (Mat2, bool) {
        let (c0, c) = self.pauli_coefficients();
        let r = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        let (lo, hi) = (c0 - r, c0 + r);
        let clamped = lo < floor;
        let (ln_lo, ln_hi) = (lo.max(floor).ln(), hi.max(floor).ln());
        if r == 0.0 {
            return (Mat2::IDENTITY.scale(ln_hi), clamped);
        }
        // spectral projectors (I ± n·σ)/2
        let n = [c[0] / r, c[1] / r, c[2] / r];
        let p_hi = Mat2::from_pauli(0.5, [0.5 * n[0], 0.5 * n[1], 0.5 * n[2]]);
        let p_lo = Mat2::IDENTITY - p_hi;
        (p_hi.scale(ln_hi) + p_lo.scale(ln_lo), clamped)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let xy = Mat2::SIGMA_X * Mat2::SIGMA_Y;
        assert_eq!(xy, Mat2::SIGMA_Z.scale_c(I));
        let c = Mat2::SIGMA_X.commutator(&Mat2::SIGMA_Z);
        assert_eq!(c, Mat2::SIGMA_Y.scale_c(Complex64::new(0.0, -2.0)));
    }

    #[test]
    fn pauli_roundtrip() {
        let m = Mat2::from_pauli(0.3, [0.1, -0.2, 0.7]);
        let (c0, c) = m.pauli_coefficients();
        assert!((c0 - 0.3).abs() < 1e-15);
        assert!((c[0] - 0.1).abs() < 1e-15 && (c[1] + 0.2).abs() < 1e-15 && (c[2] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn log_of_diagonal() {
        let m = Mat2::from_real([[0.25, 0.0], [0.0, 0.75]]);
        let (l, clamped) = m.hermitian_log(1e-12);
        assert!(!clamped);
        assert!((l.0[0][0].re - 0.25f64.ln()).abs() < 1e-14);
        assert!((l.0[1][1].re - 0.75f64.ln()).abs() < 1e-14);
        assert!(l.0[0][1].norm() < 1e-15);
    }

    #[test]
    fn log_floor_is_flagged() {
        let (l, clamped) = Mat2::from_real([[1.0, 0.0], [0.0, 0.0]]).hermitian_log(1e-12);
        assert!(clamped);
        assert!((l.0[1][1].re - 1e-12f64.ln()).abs() < 1e-12);
    }
}
