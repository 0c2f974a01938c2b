//! The discrete-time quantum walk evolved in Fourier space.
//!
//! One step maps mode `k` as `psi_hat <- C_l * diag(e^{2 i pi k/N}, e^{-2 i pi k/N}) * psi_hat`
//! with coin `C_l = R_X(2 eps m) R_Z(-2 eps q A_l)` in the gauge `A_0 = 0`,
//! `A_l = E l eps`. Step `l -> l+1` consumes the potential at the current
//! index `l`, so the first step is field-free.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ModeSpectrum, Spinor, SpinorField};
use crate::fourier::{dft_forward, dft_inverse};
use crate::grid::GridSpec;
use crate::unitary::Unitary2;

/// Mass, charge and electric field strength (units with `hbar = c = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub mass: f64,
    pub charge: f64,
    pub field: f64,
}

impl WalkParams {
    pub fn new(mass: f64, charge: f64, field: f64) -> Result<Self> {
        let p = Self { mass, charge, field };
        p.validate()?;
        Ok(p)
    }

    pub fn free(mass: f64) -> Self {
        Self {
            mass,
            charge: 0.0,
            field: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mass.is_finite() || self.mass < 0.0 {
            return Err(Error::Config(format!("mass {} must be finite and >= 0", self.mass)));
        }
        if !self.charge.is_finite() || !self.field.is_finite() {
            return Err(Error::Config("charge and field must be finite".into()));
        }
        Ok(())
    }

    /// Vector potential `A_1` at step `l`.
    pub fn potential(&self, l: usize, eps: f64) -> f64 {
        self.field * l as f64 * eps
    }
}

/// Coin operator for step `l`.
pub fn coin_matrix(l: usize, params: &WalkParams, grid: &GridSpec) -> Unitary2 {
    let eps = grid.eps();
    let a1 = params.potential(l, eps);
    Unitary2::rx(2.0 * eps * params.mass) * Unitary2::rz(-2.0 * eps * params.charge * a1)
}

/// Coin-conditioned shift of mode `k` as the diagonal phase pair
/// `(e^{2 i pi k/N}, e^{-2 i pi k/N})`.
pub fn shift_phases(k: i64, n: usize) -> Result<(Complex64, Complex64)> {
    let half = (n / 2) as i64;
    if k < -half || k >= half {
        return Err(Error::ModeIndex { k, half });
    }
    Ok(shift_phases_unchecked(k, n))
}

pub(crate) fn shift_phases_unchecked(k: i64, n: usize) -> (Complex64, Complex64) {
    let phase = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
    (phase, phase.conj())
}

#[inline]
fn advance(v: Spinor, coin: &Unitary2, pl: Complex64, pr: Complex64) -> Spinor {
    coin.apply(Spinor::new(v.l * pl, v.r * pr))
}

/// Coins for steps `0..steps`, shared by every mode.
#[derive(Debug, Clone)]
pub struct CoinSchedule {
    coins: Vec<Unitary2>,
}

impl CoinSchedule {
    pub fn new(steps: usize, params: &WalkParams, grid: &GridSpec) -> Self {
        Self::starting_at(0, steps, params, grid)
    }

    /// Coins for steps `first..first + steps`.
    pub fn starting_at(first: usize, steps: usize, params: &WalkParams, grid: &GridSpec) -> Self {
        let coins = (first..first + steps)
            .map(|l| coin_matrix(l, params, grid))
            .collect();
        Self { coins }
    }

    pub fn len(&self) -> usize {
        self.coins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coins.is_empty()
    }

    pub fn coins(&self) -> &[Unitary2] {
        &self.coins
    }

    /// Evolve one mode amplitude through every step of the schedule.
    pub fn evolve_mode(&self, k: i64, n: usize, v: Spinor) -> Spinor {
        let (pl, pr) = shift_phases_unchecked(k, n);
        self.coins
            .iter()
            .fold(v, |acc, coin| advance(acc, coin, pl, pr))
    }

    /// Ordered product of the per-step factors, earliest step rightmost.
    pub fn propagator(&self, k: i64, n: usize) -> Unitary2 {
        let (pl, pr) = shift_phases_unchecked(k, n);
        self.coins
            .iter()
            .fold(Unitary2::IDENTITY, |acc, coin| coin.mul_diag(pl, pr) * acc)
    }
}

/// One walk step in Fourier space.
pub fn step_spectrum(spec: &ModeSpectrum, l: usize, params: &WalkParams) -> ModeSpectrum {
    let grid = *spec.grid();
    let coin = coin_matrix(l, params, &grid);
    let n = grid.len();
    let values = spec
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let (pl, pr) = shift_phases_unchecked(grid.label(i), n);
            advance(*v, &coin, pl, pr)
        })
        .collect();
    ModeSpectrum::from_parts(grid, values, spec.scale())
}

/// `steps` walk steps applied to a spectrum, modes in parallel. Bit-identical
/// to repeated [`step_spectrum`].
pub fn evolve_spectrum(spec: &ModeSpectrum, steps: usize, params: &WalkParams) -> ModeSpectrum {
    let grid = *spec.grid();
    let schedule = CoinSchedule::new(steps, params, &grid);
    evolve_spectrum_with(spec, &schedule, None)
}

/// Evolve the modes whose `active` flag is set; the rest become exact zeros.
pub fn evolve_spectrum_with(
    spec: &ModeSpectrum,
    schedule: &CoinSchedule,
    active: Option<&[bool]>,
) -> ModeSpectrum {
    let grid = *spec.grid();
    let n = grid.len();
    let mut values = spec.values().to_vec();
    values.par_iter_mut().enumerate().for_each(|(i, v)| {
        if active.map_or(true, |a| a[i]) {
            *v = schedule.evolve_mode(grid.label(i), n, *v);
        } else {
            *v = Spinor::ZERO;
        }
    });
    ModeSpectrum::from_parts(grid, values, spec.scale())
}

/// Classical reference path: FFT, `steps` spectral steps, inverse FFT.
pub fn evolve_spectral(field: &SpinorField, steps: usize, params: &WalkParams) -> SpinorField {
    if steps == 0 {
        return field.clone();
    }
    dft_inverse(&evolve_spectrum(&dft_forward(field), steps, params))
}

/// Total single-mode evolution operator after `steps` steps.
pub fn mode_propagator(
    k: i64,
    steps: usize,
    params: &WalkParams,
    grid: &GridSpec,
) -> Result<Unitary2> {
    grid.slot(k)?;
    Ok(CoinSchedule::new(steps, params, grid).propagator(k, grid.len()))
}
