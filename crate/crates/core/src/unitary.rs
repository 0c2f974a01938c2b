use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::Spinor;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2x2 complex matrix acting on `(L, R)` / qubit `(|0>, |1>)` amplitudes.
///
/// Entries are row-major: `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Unitary2 {
    pub m: [[Complex64; 2]; 2],
}

impl Unitary2 {
    pub const IDENTITY: Unitary2 = Unitary2 {
        m: [[ONE, ZERO], [ZERO, ONE]],
    };

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    /// `R_X(theta) = [[cos(theta/2), -i sin(theta/2)], [-i sin(theta/2), cos(theta/2)]]`.
    pub fn rx(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let off = Complex64::new(0.0, -s);
        Self::new(Complex64::new(c, 0.0), off, off, Complex64::new(c, 0.0))
    }

    /// `R_Z(theta) = diag(exp(-i theta/2), exp(i theta/2))`.
    pub fn rz(theta: f64) -> Self {
        Self::diag(
            Complex64::from_polar(1.0, -theta / 2.0),
            Complex64::from_polar(1.0, theta / 2.0),
        )
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new(h, h, h, -h)
    }

    /// `S^dagger = diag(1, -i)`.
    pub fn s_dagger() -> Self {
        Self::diag(ONE, Complex64::new(0.0, -1.0))
    }

    pub fn dagger(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn apply(&self, v: Spinor) -> Spinor {
        let [[a, b], [c, d]] = self.m;
        Spinor::new(a * v.l + b * v.r, c * v.l + d * v.r)
    }

    /// Multiply the columns by `(dl, dr)`: `self * diag(dl, dr)`.
    pub fn mul_diag(&self, dl: Complex64, dr: Complex64) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(a * dl, b * dr, c * dl, d * dr)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(a * s, b * s, c * s, d * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] += other.m[i][j];
            }
        }
        out
    }

    /// Max-abs entry of `U^dagger U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.dagger() * *self;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { ONE } else { ZERO };
                worst = worst.max((p.m[i][j] - id).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = rhs.m;
        Unitary2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Default for Unitary2 {
    fn default() -> Self {
        Self::IDENTITY
    }
}
