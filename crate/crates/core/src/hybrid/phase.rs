//! Global-phase recovery from the Hadamard-test overlap.
//!
//! Circuit b yields `z = <k0|U_T|k0> = e^{i Phi+_T} <k0|psi~_T>` where
//! `psi~_T` is the Bloch state estimated by circuit a. Dividing out the
//! computable overlap leaves the phase.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::encoding::{bloch_state, qubit, wrap_phase, ModeEncoding};
use super::tomography::{BlochEstimate, HadamardCounts};
use super::HybridConfig;
use crate::field::Spinor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimate {
    /// Accumulated global phase `Phi+_T`, in `(-pi, pi]`.
    pub phi_plus: f64,
    /// `|<k0|psi~_T>|` compared against the threshold.
    pub overlap: f64,
    pub reliable: bool,
    /// Delta-method standard error from both circuits' shot noise.
    pub stderr: f64,
}

fn state_overlap(k0: Spinor, alpha: f64, phi_minus: f64) -> Complex64 {
    let t = qubit(alpha, phi_minus);
    k0.l.conj() * t.l + k0.r.conj() * t.r
}

/// Phase of `z / <k0|psi~>` with `psi~` built from a Bloch vector.
fn phase_from(z: Complex64, k0: Spinor, vector: [f64; 3]) -> f64 {
    let b = BlochEstimate::exact(vector);
    wrap_phase(z.arg() - state_overlap(k0, b.alpha, b.phi_minus).arg())
}

/// Recover `Phi+_T` from circuit-b counts and the circuit-a estimate.
pub fn recover_global_phase(
    hc: &HadamardCounts,
    enc: &ModeEncoding,
    bloch: &BlochEstimate,
    cfg: &HybridConfig,
) -> PhaseEstimate {
    phase_from_overlap(hc.overlap(), hc.stderr(), enc, bloch, cfg)
}

/// As [`recover_global_phase`] for an overlap `z` known with the given
/// per-component standard errors.
pub fn phase_from_overlap(
    z: Complex64,
    z_stderr: [f64; 2],
    enc: &ModeEncoding,
    bloch: &BlochEstimate,
    cfg: &HybridConfig,
) -> PhaseEstimate {
    let [sx, sy] = z_stderr;
    let k0 = bloch_state(enc);
    let ov = state_overlap(k0, bloch.alpha, bloch.phi_minus);
    let phi_plus = wrap_phase(z.arg() - ov.arg());

    // Finite-difference gradient over the five measured expectations.
    let h = 1e-6;
    let sigmas = [bloch.stderr[0], bloch.stderr[1], bloch.stderr[2], sx, sy];
    let mut var = 0.0;
    for (i, s) in sigmas.iter().enumerate() {
        if *s == 0.0 {
            continue;
        }
        let eval = |d: f64| {
            let mut v = bloch.vector;
            let mut zz = z;
            match i {
                0..=2 => v[i] += d,
                3 => zz.re += d,
                _ => zz.im += d,
            }
            phase_from(zz, k0, v)
        };
        let g = wrap_phase(eval(h) - eval(-h)) / (2.0 * h);
        var += g * g * s * s;
    }
    let stderr = if z.norm() == 0.0 || bloch.degenerate {
        std::f64::consts::PI
    } else {
        var.sqrt().min(std::f64::consts::PI)
    };
    PhaseEstimate {
        phi_plus,
        overlap: ov.norm(),
        reliable: ov.norm() >= cfg.overlap_threshold,
        stderr,
    }
}
