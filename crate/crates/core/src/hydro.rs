//! Fluid observables of the walk: currents, Madelung variables, the shock
//! initial condition and non-relativistic residual diagnostics.
//!
//! Observables are reported in physical units, i.e. from the stored
//! amplitudes multiplied by the field's `scale`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Spinor, SpinorField};
use crate::fourier::{dft_forward, dft_inverse, spectral_derivative};
use crate::grid::GridSpec;
use crate::hybrid::wrap_phase;
use crate::walk::{evolve_spectrum, step_spectrum, WalkParams};

/// Relative `j0` level below which a point counts as vacuum.
pub const VACUUM_THRESHOLD: f64 = 1e-14;

/// `(j0, j1)` with `j0 = |R|^2 + |L|^2`, `j1 = |R|^2 - |L|^2`.
pub fn currents(field: &SpinorField) -> (Vec<f64>, Vec<f64>) {
    field
        .physical()
        .iter()
        .map(|v| {
            let (l2, r2) = (v.l.norm_sqr(), v.r.norm_sqr());
            (r2 + l2, r2 - l2)
        })
        .unzip()
}

/// Per-point fluid variables in storage order.
#[derive(Debug, Clone, PartialEq)]
pub struct HydroFields {
    pub grid: GridSpec,
    pub mass: f64,
    /// Factor the stored field was multiplied by to reach physical units.
    pub scale: f64,
    pub j0: Vec<f64>,
    pub j1: Vec<f64>,
    /// `2 |L| |R| = sqrt(j0^2 - j1^2)`.
    pub n: Vec<f64>,
    /// `j1 / j0`, set to 0 at vacuum points.
    pub u_ratio: Vec<f64>,
    pub phi_plus: Vec<f64>,
    pub phi_minus: Vec<f64>,
    /// `m n cos(phi_minus)`.
    pub w: Vec<f64>,
    pub vacuum: Vec<bool>,
}

impl HydroFields {
    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    pub fn vacuum_count(&self) -> usize {
        self.vacuum.iter().filter(|&&v| v).count()
    }

    /// Same observables for the unit-norm stored state.
    pub fn in_stored_units(&self) -> HydroFields {
        let f = 1.0 / (self.scale * self.scale);
        let sc = |v: &[f64]| v.iter().map(|x| x * f).collect::<Vec<_>>();
        HydroFields {
            scale: 1.0,
            j0: sc(&self.j0),
            j1: sc(&self.j1),
            n: sc(&self.n),
            w: sc(&self.w),
            ..self.clone()
        }
    }

    /// Slot of the largest density.
    pub fn density_argmax(&self) -> usize {
        argmax(&self.n)
    }

    /// Slot of the largest velocity ratio.
    pub fn velocity_argmax(&self) -> usize {
        argmax(&self.u_ratio)
    }
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &x)| if x > bv { (i, x) } else { (bi, bv) })
        .0
}

pub fn madelung_fields(field: &SpinorField, mass: f64) -> HydroFields {
    let values = field.physical();
    let (j0, j1) = currents(field);
    let j0_max = j0.iter().copied().fold(0.0, f64::max);
    let cut = VACUUM_THRESHOLD * j0_max;
    let len = values.len();
    let mut n = Vec::with_capacity(len);
    let mut u_ratio = Vec::with_capacity(len);
    let mut phi_plus = Vec::with_capacity(len);
    let mut phi_minus = Vec::with_capacity(len);
    let mut w = Vec::with_capacity(len);
    let mut vacuum = Vec::with_capacity(len);
    for (i, v) in values.iter().enumerate() {
        let dens = 2.0 * v.l.norm() * v.r.norm();
        let vac = !(j0[i] > cut) || j0[i] == 0.0;
        let (al, ar) = (v.l.arg(), v.r.arg());
        let pm = wrap_phase(al - ar);
        n.push(dens);
        u_ratio.push(if vac { 0.0 } else { (j1[i] / j0[i]).clamp(-1.0, 1.0) });
        phi_plus.push(wrap_phase(al + ar));
        phi_minus.push(pm);
        w.push(mass * dens * pm.cos());
        vacuum.push(vac);
    }
    HydroFields {
        grid: *field.grid(),
        mass,
        scale: field.scale(),
        j0,
        j1,
        n,
        u_ratio,
        phi_plus,
        phi_minus,
        w,
        vacuum,
    }
}

/// Remove `2 pi` jumps from a phase profile given in storage order,
/// walking along increasing `x`. For plotting only.
pub fn unwrap_along_x(grid: &GridSpec, phase: &[f64]) -> Vec<f64> {
    let mut out = phase.to_vec();
    let mut prev: Option<(f64, f64)> = None;
    for i in grid.ordered_slots() {
        let raw = phase[i];
        let val = match prev {
            None => raw,
            Some((p_raw, p_val)) => p_val + wrap_phase(raw - p_raw),
        };
        out[i] = val;
        prev = Some((raw, val));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockParams {
    pub u_max: f64,
    pub mass: f64,
    /// Background density before normalization.
    pub n0: f64,
}

impl ShockParams {
    pub fn new(u_max: f64, mass: f64) -> Result<Self> {
        let s = Self { u_max, mass, n0: 1.0 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.u_max) {
            return Err(Error::Config(format!("u_max = {} must lie in [0, 1)", self.u_max)));
        }
        if !self.mass.is_finite() || self.mass < 0.0 {
            return Err(Error::Config(format!("mass {} must be finite and >= 0", self.mass)));
        }
        if !(self.n0.is_finite() && self.n0 > 0.0) {
            return Err(Error::Config(format!("n0 = {} must be positive", self.n0)));
        }
        Ok(())
    }
}

/// Antisymmetric velocity profile `u1/u0 = -u sin x / sqrt(1 + (u sin x)^2)`
/// with phases `phi_plus = 2 m u cos x`, `phi_minus = 0`.
///
/// The field is normalized to unit L2 norm; the normalization constant is
/// kept in `scale` so physical observables keep the background `n0`.
pub fn shock_initial_condition(grid: &GridSpec, sp: &ShockParams) -> Result<SpinorField> {
    sp.validate()?;
    let eps = grid.eps();
    let mut field = SpinorField::from_fn(*grid, |p| {
        let x = p as f64 * eps;
        let s = sp.u_max * x.sin();
        let j1 = -sp.n0 * s;
        let j0 = sp.n0 * (1.0 + s * s).sqrt();
        let half_phase = Complex64::from_polar(1.0, sp.mass * sp.u_max * x.cos());
        Spinor::new(
            half_phase * ((j0 - j1) / 2.0).sqrt(),
            half_phase * ((j0 + j1) / 2.0).sqrt(),
        )
    });
    field.normalize()?;
    Ok(field)
}

/// `Q = -(1/2m) (d^2 sqrt(n)/dx^2) / sqrt(n)`, `None` where `n <= 0`.
pub fn bohm_potential(grid: &GridSpec, n: &[f64], mass: f64) -> Vec<Option<f64>> {
    let root: Vec<f64> = n.iter().map(|&v| v.max(0.0).sqrt()).collect();
    let d2 = spectral_derivative(grid, &root, 2);
    root.iter()
        .zip(d2)
        .zip(n)
        .map(|((&r, d), &v)| {
            if v > 0.0 && v.is_finite() && mass > 0.0 {
                Some(-d / (2.0 * mass * r))
            } else {
                None
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonrelResiduals {
    /// `|| d_t n + d_x (n v) ||`.
    pub continuity: f64,
    /// `|| m (d_t v + v d_x v) - q E + d_x Q ||`.
    pub burgers: f64,
}

fn l2(grid: &GridSpec, r: &[f64]) -> f64 {
    (grid.eps() * r.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Residuals of the non-relativistic continuity and charged Burgers
/// equations with `v = u_ratio`. `history` holds snapshots one walk step
/// apart; time derivatives are centered at every interior snapshot and the
/// reported norm is the RMS over those.
pub fn nonrel_residuals(history: &[HydroFields], params: &WalkParams) -> Result<NonrelResiduals> {
    if history.len() < 3 {
        return Err(Error::Usage(format!(
            "need at least 3 consecutive snapshots, got {}",
            history.len()
        )));
    }
    let grid = history[0].grid;
    if let Some(h) = history.iter().find(|h| h.grid != grid) {
        return Err(Error::GridMismatch(grid.len(), h.grid.len()));
    }
    let eps = grid.eps();
    let m = params.mass;
    let force = params.charge * params.field;
    let mut sums = (0.0, 0.0);
    let windows = history.windows(3);
    let count = windows.len() as f64;
    for win in windows {
        let (a, b, c) = (&win[0], &win[1], &win[2]);
        let flux: Vec<f64> = b.n.iter().zip(&b.u_ratio).map(|(n, v)| n * v).collect();
        let dflux = spectral_derivative(&grid, &flux, 1);
        let cont: Vec<f64> = (0..grid.len())
            .map(|i| (c.n[i] - a.n[i]) / (2.0 * eps) + dflux[i])
            .collect();

        let dv = spectral_derivative(&grid, &b.u_ratio, 1);
        let q: Vec<f64> = bohm_potential(&grid, &b.n, m)
            .into_iter()
            .map(|v| v.unwrap_or(0.0))
            .collect();
        let dq = spectral_derivative(&grid, &q, 1);
        let burg: Vec<f64> = (0..grid.len())
            .map(|i| {
                let dt_v = (c.u_ratio[i] - a.u_ratio[i]) / (2.0 * eps);
                m * (dt_v + b.u_ratio[i] * dv[i]) - force + dq[i]
            })
            .collect();
        let (rc, rb) = (l2(&grid, &cont), l2(&grid, &burg));
        sums.0 += rc * rc;
        sums.1 += rb * rb;
    }
    Ok(NonrelResiduals {
        continuity: (sums.0 / count).sqrt(),
        burgers: (sums.1 / count).sqrt(),
    })
}

/// Fields at steps `center - 1`, `center`, `center + 1` (`center >= 1`).
pub fn snapshot_window(
    field: &SpinorField,
    center: usize,
    params: &WalkParams,
) -> Result<[SpinorField; 3]> {
    if center == 0 {
        return Err(Error::Usage("centered window needs center step >= 1".into()));
    }
    let s0 = evolve_spectrum(&dft_forward(field), center - 1, params);
    let s1 = step_spectrum(&s0, center - 1, params);
    let s2 = step_spectrum(&s1, center, params);
    Ok([dft_inverse(&s0), dft_inverse(&s1), dft_inverse(&s2)])
}

/// Residuals at physical time `t` for the given initial state.
pub fn nonrel_residuals_at(
    field: &SpinorField,
    t: f64,
    params: &WalkParams,
) -> Result<NonrelResiduals> {
    let center = field.grid().steps_for_time(t)?.max(1);
    let snaps = snapshot_window(field, center, params)?;
    let history: Vec<HydroFields> = snaps.iter().map(|f| madelung_fields(f, params.mass)).collect();
    nonrel_residuals(&history, params)
}

/// Shock position reference used in reports: `x` of the slot.
pub fn slot_position(grid: &GridSpec, slot: usize) -> f64 {
    grid.position(slot)
}

/// Full width at half maximum of the density peak around `slot`, in `x`
/// units; the background level is the field minimum.
pub fn peak_width(grid: &GridSpec, n: &[f64], slot: usize) -> f64 {
    let len = grid.len();
    let floor = n.iter().copied().fold(f64::INFINITY, f64::min);
    let half = floor + 0.5 * (n[slot] - floor);
    let mut width = 1usize;
    for dir in [1usize, len - 1] {
        let mut i = slot;
        loop {
            i = (i + dir) % len;
            if n[i] < half || i == slot {
                break;
            }
            width += 1;
            if width >= len {
                return 2.0 * PI;
            }
        }
    }
    width as f64 * grid.eps()
}
