//! Unitary discrete Fourier transform between position and mode space.
//!
//! Forward: `psi_hat_k = N^{-1/2} sum_p psi_p exp(-2 i pi k p / N)`.
//! Inverse uses the conjugate kernel with the same `N^{-1/2}` factor, so both
//! directions preserve the L2 norm.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::field::{ModeSpectrum, Spinor, SpinorField};
use crate::grid::GridSpec;

fn transform(grid: &GridSpec, values: &[Spinor], direction: FftDirection) -> Vec<Spinor> {
    let n = grid.len();
    let fft = FftPlanner::<f64>::new().plan_fft(n, direction);
    let norm = 1.0 / (n as f64).sqrt();

    let mut left: Vec<Complex64> = values.iter().map(|s| s.l).collect();
    let mut right: Vec<Complex64> = values.iter().map(|s| s.r).collect();
    fft.process(&mut left);
    fft.process(&mut right);

    left.into_iter()
        .zip(right)
        .map(|(l, r)| Spinor::new(l * norm, r * norm))
        .collect()
}

/// Position space to mode space; each spin component transformed on its own.
pub fn dft_forward(field: &SpinorField) -> ModeSpectrum {
    let grid = *field.grid();
    let values = transform(&grid, field.values(), FftDirection::Forward);
    ModeSpectrum::from_parts(grid, values, field.scale())
}

/// Mode space back to position space.
pub fn dft_inverse(spec: &ModeSpectrum) -> SpinorField {
    let grid = *spec.grid();
    let values = transform(&grid, spec.values(), FftDirection::Inverse);
    SpinorField::new(grid, values)
        .expect("transform preserves length")
        .with_scale(spec.scale())
}

/// `d^order f / dx^order` of a real periodic sample on `[-pi, pi)` stored in
/// slot order. The Nyquist mode is dropped for odd orders so the result
/// stays real.
pub fn spectral_derivative(grid: &GridSpec, f: &[f64], order: u32) -> Vec<f64> {
    let n = grid.len();
    assert_eq!(f.len(), n, "sample length does not match grid");
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    let half = grid.half();
    for (i, c) in buf.iter_mut().enumerate() {
        let k = grid.label(i);
        if order % 2 == 1 && k == -half {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        *c *= Complex64::new(0.0, k as f64).powu(order);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let inv = 1.0 / n as f64;
    buf.into_iter().map(|c| c.re * inv).collect()
}
