//! The full hybrid pipeline: FFT, per-mode circuits, reconstruction, IFFT.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::circuits::ModeCircuits;
use super::compress::{compress_spectrum, ActiveModes};
use super::encoding::{decompose_mode, qubit, wrap_phase, ModeEncoding};
use super::phase::{phase_from_overlap, recover_global_phase, PhaseEstimate};
use super::tomography::{estimate_bloch, BlochEstimate};
use super::{Backend, HybridConfig};
use crate::error::{Error, Result};
use crate::field::{ModeSpectrum, Spinor, SpinorField};
use crate::fourier::{dft_forward, dft_inverse};
use crate::walk::{CoinSchedule, WalkParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeStderr {
    pub alpha: f64,
    pub phi_minus: f64,
    pub phi_plus: f64,
}

/// Per-mode record of what the circuits returned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeDiagnostics {
    pub k: i64,
    pub amp: f64,
    pub alpha_hat: f64,
    pub phi_minus_hat: f64,
    /// Global phase accumulated during the evolution.
    pub phi_plus_hat: f64,
    pub stderr: ModeStderr,
    pub reliable: bool,
    /// Total shots spent on this mode across both circuits; 0 for the ideal backend.
    pub shots: u64,
}

#[derive(Debug, Clone)]
pub struct HybridRun {
    pub field: SpinorField,
    pub spectrum: ModeSpectrum,
    pub modes: Vec<ModeDiagnostics>,
    pub active: ActiveModes,
    pub steps: usize,
}

impl HybridRun {
    pub fn active_count(&self) -> usize {
        self.active.len()
    }

    pub fn unreliable_count(&self) -> usize {
        self.modes.iter().filter(|m| !m.reliable).count()
    }
}

/// Final amplitude of one mode from its encoding and circuit estimates.
fn reconstruct(enc: &ModeEncoding, bloch: &BlochEstimate, phase: &PhaseEstimate) -> Spinor {
    let global = Complex64::from_polar(enc.amp, enc.phi_plus + phase.phi_plus);
    qubit(bloch.alpha, bloch.phi_minus) * global
}

fn run_mode(
    enc: &ModeEncoding,
    schedule: &CoinSchedule,
    n: usize,
    cfg: &HybridConfig,
) -> Result<(Spinor, ModeDiagnostics)> {
    let circuits = ModeCircuits::new(enc, schedule, n, &cfg.noise);
    let (bloch, phase, shots) = match cfg.backend {
        Backend::Ideal => {
            let exp = circuits.expectations();
            let bloch = BlochEstimate::exact(exp.bloch);
            let phase = phase_from_overlap(exp.overlap, [0.0; 2], enc, &bloch, cfg);
            (bloch, phase, 0)
        }
        Backend::Sampled => {
            let m = cfg.shots;
            let bloch = estimate_bloch(&circuits.circuit_a(m, cfg.seed)?)?;
            let hc = circuits.circuit_b(m, cfg.seed, false)?;
            let mut phase = recover_global_phase(&hc, enc, &bloch, cfg);
            let mut shots = 5 * m;
            if !phase.reliable {
                let retry = circuits.circuit_b(2 * m, cfg.seed, true)?;
                phase = recover_global_phase(&retry, enc, &bloch, cfg);
                shots += 4 * m;
            }
            (bloch, phase, shots)
        }
    };
    let diag = ModeDiagnostics {
        k: enc.k,
        amp: enc.amp,
        alpha_hat: bloch.alpha,
        phi_minus_hat: bloch.phi_minus,
        phi_plus_hat: wrap_phase(phase.phi_plus),
        stderr: ModeStderr {
            alpha: bloch.alpha_stderr(),
            phi_minus: bloch.phi_minus_stderr(),
            phi_plus: phase.stderr,
        },
        reliable: phase.reliable,
        shots,
    };
    Ok((reconstruct(enc, &bloch, &phase), diag))
}

/// Evolve `field` by `steps` walk steps through the emulated circuits.
pub fn run_hybrid(
    field: &SpinorField,
    steps: usize,
    params: &WalkParams,
    cfg: &HybridConfig,
) -> Result<HybridRun> {
    cfg.validate()?;
    params.validate()?;
    let grid = *field.grid();
    let spec = dft_forward(field);
    let active = compress_spectrum(&spec, cfg)?;
    let schedule = CoinSchedule::new(steps, params, &grid);
    let n = grid.len();

    let results: Vec<Result<(usize, Spinor, ModeDiagnostics)>> = active
        .labels
        .par_iter()
        .map(|&k| {
            let slot = grid.slot(k)?;
            let enc = decompose_mode(k, spec.values()[slot]);
            let (v, d) = run_mode(&enc, &schedule, n, cfg)?;
            if !v.l.is_finite() || !v.r.is_finite() {
                return Err(Error::Consistency(format!("mode {k} reconstructed as non-finite")));
            }
            Ok((slot, v, d))
        })
        .collect();

    let mut out = ModeSpectrum::zeros(grid).with_scale(spec.scale());
    let mut modes = Vec::with_capacity(results.len());
    for r in results {
        let (slot, v, d) = r?;
        out.values_mut()[slot] = v;
        modes.push(d);
    }
    Ok(HybridRun {
        field: dft_inverse(&out),
        spectrum: out,
        modes,
        active,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, GridSpec};
    use crate::hybrid::NoiseModel;
    use crate::walk::evolve_spectral;

    fn lcg_field(grid: GridSpec, seed: u64) -> SpinorField {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut f = SpinorField::from_fn(grid, |_| {
            Spinor::new(Complex64::new(next(), next()), Complex64::new(next(), next()))
        });
        f.normalize().unwrap();
        f
    }

    #[test]
    fn ideal_backend_matches_classical_path() {
        let params = WalkParams::new(6.0, -1.0, 0.6).unwrap();
        for n_exp in [2, 3, 5] {
            let g = make_grid(n_exp).unwrap();
            for steps in [0, 1, 7] {
                let f = lcg_field(g, 17 + steps as u64);
                let run = run_hybrid(&f, steps, &params, &HybridConfig::ideal()).unwrap();
                let reference = evolve_spectral(&f, steps, &params);
                let d = run.field.max_abs_diff(&reference);
                assert!(d < 1e-10, "N=2^{n_exp} T={steps}: {d}");
                assert_eq!(run.field.scale(), reference.scale());
                assert!(run.modes.iter().all(|m| m.shots == 0));
            }
        }
    }

    #[test]
    fn sampled_run_is_deterministic_per_seed() {
        let g = make_grid(3).unwrap();
        let f = lcg_field(g, 3);
        let p = WalkParams::new(2.0, -1.0, 0.5).unwrap();
        let cfg = HybridConfig { shots: 512, seed: 42, ..HybridConfig::default() };
        let a = run_hybrid(&f, 4, &p, &cfg).unwrap();
        let b = run_hybrid(&f, 4, &p, &cfg).unwrap();
        assert_eq!(a.field.values(), b.field.values());
        assert_eq!(a.modes, b.modes);
        let c = run_hybrid(&f, 4, &p, &HybridConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.field.values(), c.field.values());
    }

    #[test]
    fn sampled_reconstruction_within_shot_noise() {
        let g = make_grid(3).unwrap();
        let f = lcg_field(g, 5);
        let p = WalkParams::new(2.0, -1.0, 0.5).unwrap();
        let cfg = HybridConfig { shots: 1_000_000, seed: 7, ..HybridConfig::default() };
        let run = run_hybrid(&f, 4, &p, &cfg).unwrap();
        let reference = dft_forward(&evolve_spectral(&f, 4, &p));
        for d in &run.modes {
            let got = run.spectrum.mode(d.k).unwrap();
            let want = reference.mode(d.k).unwrap();
            // Per-component error bound from the angle standard errors.
            let tol = 5.0 * d.amp * (d.stderr.alpha + d.stderr.phi_minus + d.stderr.phi_plus);
            assert!(got.max_abs_diff(&want) < tol, "k={} {} vs {}", d.k, got.max_abs_diff(&want), tol);
        }
    }

    #[test]
    fn compression_zeroes_inactive_modes() {
        let g = make_grid(4).unwrap();
        let mut spec = ModeSpectrum::zeros(g);
        spec.set_mode(1, Spinor::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)))
            .unwrap();
        spec.set_mode(-3, Spinor::new(Complex64::new(1e-9, 0.0), Complex64::new(0.0, 0.0)))
            .unwrap();
        let f = dft_inverse(&spec);
        let cfg = HybridConfig { compression: true, tau: 1e-6, ..HybridConfig::ideal() };
        let p = WalkParams::new(3.0, -1.0, 1.0).unwrap();
        let run = run_hybrid(&f, 5, &p, &cfg).unwrap();
        assert_eq!(run.active_count(), 1);
        assert_eq!(run.spectrum.mode(-3).unwrap(), Spinor::ZERO);
        assert_eq!(run.modes.len(), 1);
    }

    #[test]
    fn noisy_ideal_backend_is_finite() {
        let g = make_grid(3).unwrap();
        let f = lcg_field(g, 9);
        let p = WalkParams::new(2.0, -1.0, 0.5).unwrap();
        let cfg = HybridConfig { noise: NoiseModel::nisq_like(), ..HybridConfig::ideal() };
        let run = run_hybrid(&f, 6, &p, &cfg).unwrap();
        assert!(run.field.values().iter().all(|v| v.l.is_finite() && v.r.is_finite()));
    }

    #[test]
    fn zero_field_is_degenerate() {
        let g = make_grid(3).unwrap();
        let f = SpinorField::zeros(g);
        let r = run_hybrid(&f, 1, &WalkParams::free(1.0), &HybridConfig::ideal());
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }
}
