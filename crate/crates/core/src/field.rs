//! Two-component wavefunctions in position and mode space.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// One `(psi_L, psi_R)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Spinor {
    pub l: Complex64,
    pub r: Complex64,
}

impl Spinor {
    pub const ZERO: Spinor = Spinor {
        l: Complex64::new(0.0, 0.0),
        r: Complex64::new(0.0, 0.0),
    };

    pub fn new(l: Complex64, r: Complex64) -> Self {
        Self { l, r }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.l.norm_sqr() + self.r.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.l.norm().hypot(self.r.norm())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.l * s, self.r * s)
    }

    pub fn dist(&self, other: &Spinor) -> f64 {
        ((self.l - other.l).norm_sqr() + (self.r - other.r).norm_sqr()).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Spinor) -> f64 {
        (self.l - other.l).norm().max((self.r - other.r).norm())
    }
}

impl std::ops::Mul<Complex64> for Spinor {
    type Output = Spinor;

    fn mul(self, rhs: Complex64) -> Spinor {
        Spinor::new(self.l * rhs, self.r * rhs)
    }
}

/// Position-space state of the walker.
///
/// `scale` records the factor that maps stored (normalized) amplitudes back to
/// physical units: physical = stored * scale. Unitary evolution carries it
/// unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    grid: GridSpec,
    values: Vec<Spinor>,
    scale: f64,
}

impl SpinorField {
    pub fn new(grid: GridSpec, values: Vec<Spinor>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(values.len(), grid.len()));
        }
        if values.iter().any(|s| !s.norm_sqr().is_finite()) {
            return Err(Error::Config("field contains non-finite amplitudes".into()));
        }
        Ok(Self {
            grid,
            values,
            scale: 1.0,
        })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![Spinor::ZERO; grid.len()],
            scale: 1.0,
        }
    }

    /// Build from a function of the signed label `p`.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(i64) -> Spinor) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.label(i))).collect();
        Self {
            grid,
            values,
            scale: 1.0,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Amplitudes in storage (wraparound) order.
    pub fn values(&self) -> &[Spinor] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Spinor] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Spinor> {
        self.values
    }

    pub fn at(&self, p: i64) -> Result<Spinor> {
        Ok(self.values[self.grid.slot(p)?])
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    /// Amplitudes multiplied by the recorded scale.
    pub fn physical(&self) -> Vec<Spinor> {
        self.values.iter().map(|s| s.scale(self.scale)).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(Spinor::norm_sqr).sum()
    }

    /// Rescale to unit norm. The previous norm is folded into `scale`, so
    /// physical amplitudes are unchanged. Returns the previous norm.
    pub fn normalize(&mut self) -> Result<f64> {
        let norm = l2_norm(self);
        if norm == 0.0 {
            return Err(Error::Degenerate("cannot normalize a zero field".into()));
        }
        let inv = 1.0 / norm;
        for s in &mut self.values {
            *s = s.scale(inv);
        }
        self.scale *= norm;
        Ok(norm)
    }

    /// Largest componentwise modulus of the difference.
    pub fn max_abs_diff(&self, other: &SpinorField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Fourier-space state of the walker, stored in FFT wraparound order.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    grid: GridSpec,
    values: Vec<Spinor>,
    scale: f64,
}

impl ModeSpectrum {
    pub fn new(grid: GridSpec, values: Vec<Spinor>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(values.len(), grid.len()));
        }
        Ok(Self {
            grid,
            values,
            scale: 1.0,
        })
    }

    pub(crate) fn from_parts(grid: GridSpec, values: Vec<Spinor>, scale: f64) -> Self {
        Self { grid, values, scale }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::from_parts(grid, vec![Spinor::ZERO; grid.len()], 1.0)
    }

    /// Spectrum holding a single mode `k`.
    pub fn single_mode(grid: GridSpec, k: i64, amp: Spinor) -> Result<Self> {
        let mut spec = Self::zeros(grid);
        let slot = grid.slot(k)?;
        spec.values[slot] = amp;
        Ok(spec)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Spinor] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Spinor] {
        &mut self.values
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    /// Amplitude of signed mode `k`.
    pub fn mode(&self, k: i64) -> Result<Spinor> {
        Ok(self.values[self.grid.slot(k)?])
    }

    pub fn set_mode(&mut self, k: i64, v: Spinor) -> Result<()> {
        let slot = self.grid.slot(k)?;
        self.values[slot] = v;
        Ok(())
    }

    /// `(k, amplitude)` pairs in storage order.
    pub fn modes(&self) -> impl Iterator<Item = (i64, &Spinor)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, s)| (self.grid.label(i), s))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(Spinor::norm_sqr).sum()
    }
}

/// `sqrt(sum_p |psi_L|^2 + |psi_R|^2)` over stored amplitudes.
pub fn l2_norm(field: &SpinorField) -> f64 {
    field.norm_sqr().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn norm_of_zero_and_delta() {
        let g = make_grid(4).unwrap();
        assert_eq!(l2_norm(&SpinorField::zeros(g)), 0.0);
        let f = SpinorField::from_fn(g, |p| {
            if p == 3 {
                Spinor::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                Spinor::ZERO
            }
        });
        assert_eq!(l2_norm(&f), 1.0);
    }

    #[test]
    fn length_checked() {
        let g = make_grid(3).unwrap();
        assert!(matches!(
            SpinorField::new(g, vec![Spinor::ZERO; 7]),
            Err(Error::GridMismatch(7, 8))
        ));
    }

    #[test]
    fn normalize_keeps_physical_values() {
        let g = make_grid(3).unwrap();
        let mut f = SpinorField::from_fn(g, |p| {
            Spinor::new(Complex64::new(p as f64, 1.0), Complex64::new(0.5, -(p as f64)))
        });
        let before = f.physical();
        let n = f.normalize().unwrap();
        assert!(n > 0.0);
        assert!((l2_norm(&f) - 1.0).abs() < 1e-12);
        for (a, b) in before.iter().zip(f.physical()) {
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
        assert!(SpinorField::zeros(g).normalize().is_err());
    }
}
