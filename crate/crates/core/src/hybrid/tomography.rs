//! Single-qubit tomography from x/y/z-basis measurement counts.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Measurement basis selected by the pre-measurement rotation: `H` for x,
/// `H S^dagger` (S^dagger applied first) for y, identity for z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BasisCounts {
    pub zeros: u64,
    pub ones: u64,
}

impl BasisCounts {
    pub fn total(&self) -> u64 {
        self.zeros + self.ones
    }

    /// `(c0 - c1) / M`, the estimated expectation of the measured Pauli.
    pub fn expectation(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        (self.zeros as f64 - self.ones as f64) / total as f64
    }
}

fn component_stderr(v: f64, shots: u64) -> f64 {
    ((1.0 - v * v).max(0.0) / shots as f64).sqrt()
}

/// Counts from circuit a: `shots_per_basis` shots in each of x, y, z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TomographyCounts {
    pub shots_per_basis: u64,
    pub x: BasisCounts,
    pub y: BasisCounts,
    pub z: BasisCounts,
    pub rng_seed: u64,
}

impl TomographyCounts {
    pub fn new(
        shots_per_basis: u64,
        x: BasisCounts,
        y: BasisCounts,
        z: BasisCounts,
        rng_seed: u64,
    ) -> Result<Self> {
        let c = Self { shots_per_basis, x, y, z, rng_seed };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots_per_basis == 0 {
            return Err(Error::Usage("tomography needs at least one shot per basis".into()));
        }
        for (name, b) in [("x", self.x), ("y", self.y), ("z", self.z)] {
            if b.total() != self.shots_per_basis {
                return Err(Error::Usage(format!(
                    "{name}-basis counts sum to {} instead of {}",
                    b.total(),
                    self.shots_per_basis
                )));
            }
        }
        Ok(())
    }

    pub fn basis(&self, b: Basis) -> BasisCounts {
        match b {
            Basis::X => self.x,
            Basis::Y => self.y,
            Basis::Z => self.z,
        }
    }
}

/// Counts from the ancilla of circuit b in the x and y bases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HadamardCounts {
    pub shots_per_basis: u64,
    pub x: BasisCounts,
    pub y: BasisCounts,
}

impl HadamardCounts {
    pub fn new(shots_per_basis: u64, x: BasisCounts, y: BasisCounts) -> Result<Self> {
        if shots_per_basis == 0 || x.total() != shots_per_basis || y.total() != shots_per_basis {
            return Err(Error::Usage(format!(
                "hadamard counts ({}, {}) inconsistent with {shots_per_basis} shots",
                x.total(),
                y.total()
            )));
        }
        Ok(Self { shots_per_basis, x, y })
    }

    /// Estimated overlap `<x> + i <y>`.
    pub fn overlap(&self) -> Complex64 {
        Complex64::new(self.x.expectation(), self.y.expectation())
    }

    /// Standard errors of the real and imaginary parts.
    pub fn stderr(&self) -> [f64; 2] {
        let z = self.overlap();
        [
            component_stderr(z.re, self.shots_per_basis),
            component_stderr(z.im, self.shots_per_basis),
        ]
    }
}

/// Bloch-vector estimate and the angles derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochEstimate {
    pub alpha: f64,
    pub phi_minus: f64,
    pub vector: [f64; 3],
    /// Per-component standard error `sqrt((1 - v^2) / M)`.
    pub stderr: [f64; 3],
    pub degenerate: bool,
}

impl BlochEstimate {
    /// Angles from a Bloch vector with known per-component standard errors.
    pub fn from_vector(vector: [f64; 3], stderr: [f64; 3]) -> Self {
        let [x, y, z] = vector;
        let degenerate = x == 0.0 && y == 0.0 && z == 0.0;
        let alpha = x.hypot(y).atan2(z);
        let phi_minus = if x == 0.0 && y == 0.0 { 0.0 } else { y.atan2(x) };
        Self {
            alpha,
            phi_minus,
            vector,
            stderr,
            degenerate,
        }
    }

    /// Exact expectation values: zero statistical error.
    pub fn exact(vector: [f64; 3]) -> Self {
        Self::from_vector(vector, [0.0; 3])
    }

    pub fn length(&self) -> f64 {
        let [x, y, z] = self.vector;
        (x * x + y * y + z * z).sqrt()
    }

    /// Delta-method standard error of `alpha`; `pi` when degenerate.
    pub fn alpha_stderr(&self) -> f64 {
        let [x, y, z] = self.vector;
        let [sx, sy, sz] = self.stderr;
        let rho2 = x * x + y * y;
        let r2 = rho2 + z * z;
        if self.degenerate || r2 == 0.0 {
            return PI;
        }
        if rho2 == 0.0 {
            // alpha sits on a pole; first-order sensitivity to x, y is |dx|/|z|
            return (sx.max(sy) / z.abs()).min(PI);
        }
        let var_rho = (x * x * sx * sx + y * y * sy * sy) / rho2;
        ((z * z * var_rho + rho2 * sz * sz).sqrt() / r2).min(PI)
    }

    /// Delta-method standard error of `phi_minus`; `pi` when undefined.
    pub fn phi_minus_stderr(&self) -> f64 {
        let [x, y, _] = self.vector;
        let [sx, sy, _] = self.stderr;
        let rho2 = x * x + y * y;
        if self.degenerate || rho2 == 0.0 {
            return PI;
        }
        ((x * x * sy * sy + y * y * sx * sx).sqrt() / rho2).min(PI)
    }
}

pub fn estimate_bloch(counts: &TomographyCounts) -> Result<BlochEstimate> {
    counts.validate()?;
    let m = counts.shots_per_basis;
    let v = [
        counts.x.expectation(),
        counts.y.expectation(),
        counts.z.expectation(),
    ];
    let stderr = v.map(|c| component_stderr(c, m));
    Ok(BlochEstimate::from_vector(v, stderr))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(m: u64, x0: u64, y0: u64, z0: u64) -> TomographyCounts {
        let b = |c0| BasisCounts { zeros: c0, ones: m - c0 };
        TomographyCounts::new(m, b(x0), b(y0), b(z0), 0).unwrap()
    }

    #[test]
    fn pure_zero_state() {
        let e = estimate_bloch(&counts(1000, 500, 500, 1000)).unwrap();
        assert_eq!(e.alpha, 0.0);
        assert_eq!(e.vector, [0.0, 0.0, 1.0]);
        assert!(!e.degenerate);
    }

    #[test]
    fn plus_state() {
        let e = estimate_bloch(&counts(1000, 1000, 500, 500)).unwrap();
        assert!((e.alpha - PI / 2.0).abs() < 1e-15);
        assert_eq!(e.phi_minus, 0.0);
    }

    #[test]
    fn minus_i_state_phase() {
        let e = estimate_bloch(&counts(1000, 500, 0, 500)).unwrap();
        assert!((e.phi_minus + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_vector_flagged() {
        let e = estimate_bloch(&counts(1000, 500, 500, 500)).unwrap();
        assert!(e.degenerate);
        assert_eq!(e.phi_minus, 0.0);
        assert_eq!(e.phi_minus_stderr(), PI);
        assert_eq!(e.alpha_stderr(), PI);
    }

    #[test]
    fn stderr_formula() {
        let e = estimate_bloch(&counts(10_000, 7500, 5000, 10_000)).unwrap();
        assert!((e.stderr[0] - (0.75f64 / 10_000.0).sqrt()).abs() < 1e-15);
        assert!((e.stderr[1] - 0.01).abs() < 1e-15);
        assert_eq!(e.stderr[2], 0.0);
    }

    #[test]
    fn inconsistent_counts_rejected() {
        let b = BasisCounts { zeros: 3, ones: 4 };
        assert!(TomographyCounts::new(8, b, b, b, 0).is_err());
        assert!(TomographyCounts::new(0, BasisCounts::default(), BasisCounts::default(), BasisCounts::default(), 0).is_err());
        assert!(HadamardCounts::new(7, b, BasisCounts { zeros: 7, ones: 1 }).is_err());
    }

    #[test]
    fn hadamard_overlap() {
        let h = HadamardCounts::new(
            100,
            BasisCounts { zeros: 100, ones: 0 },
            BasisCounts { zeros: 50, ones: 50 },
        )
        .unwrap();
        assert_eq!(h.overlap(), Complex64::new(1.0, 0.0));
        assert_eq!(h.stderr(), [0.0, 0.1]);
    }
}
