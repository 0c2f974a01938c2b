use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::Spinor;

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// One Fourier mode split into its classical part (amplitude, global phase)
/// and the qubit it is loaded into (Bloch angles).
///
/// Branches: `alpha` in `[0, pi]`, phases in `(-pi, pi]`, and `phi_minus = 0`
/// whenever `sin(alpha/2) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeEncoding {
    pub k: i64,
    pub amp: f64,
    pub phi_plus: f64,
    pub alpha: f64,
    pub phi_minus: f64,
}

impl ModeEncoding {
    /// Zero modes carry the canonical `|0>` encoding and are never simulated.
    pub fn is_active(&self) -> bool {
        self.amp > 0.0
    }

    pub fn reconstruct(&self) -> Spinor {
        bloch_state(self).scale(self.amp) * Complex64::from_polar(1.0, self.phi_plus)
    }
}

pub fn decompose_mode(k: i64, psi: Spinor) -> ModeEncoding {
    let amp = psi.norm();
    if amp == 0.0 {
        return ModeEncoding {
            k,
            amp: 0.0,
            phi_plus: 0.0,
            alpha: 0.0,
            phi_minus: 0.0,
        };
    }
    let (ml, mr) = (psi.l.norm(), psi.r.norm());
    let phi_plus = if ml > 0.0 { psi.l.arg() } else { psi.r.arg() };
    let alpha = 2.0 * mr.atan2(ml);
    let phi_minus = if mr > 0.0 {
        wrap_phase(psi.r.arg() - phi_plus)
    } else {
        0.0
    };
    ModeEncoding {
        k,
        amp,
        phi_plus: wrap_phase(phi_plus),
        alpha,
        phi_minus,
    }
}

/// `U(alpha, phi_minus)|0> = (cos(alpha/2), sin(alpha/2) e^{i phi_minus})`.
pub fn bloch_state(enc: &ModeEncoding) -> Spinor {
    qubit(enc.alpha, enc.phi_minus)
}

pub(crate) fn qubit(alpha: f64, phi_minus: f64) -> Spinor {
    let (s, c) = (alpha / 2.0).sin_cos();
    Spinor::new(Complex64::new(c, 0.0), Complex64::from_polar(s, phi_minus))
}
