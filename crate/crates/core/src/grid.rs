//! Periodic one-dimensional lattice.
//!
//! Grid points carry a signed label `p` in `[-N/2, N/2)` with position
//! `x_p = eps * p`, `eps = 2*pi/N`. Storage follows the FFT wraparound
//! order: storage index `i` holds label `p = i` for `i < N/2` and
//! `p = i - N` otherwise. The same bijection is used for mode labels `k`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_EXP: u32 = 2;
pub const MAX_EXP: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n_exp: u32,
    len: usize,
    eps: f64,
}

impl GridSpec {
    pub fn new(n_exp: u32) -> Result<Self> {
        if !(MIN_EXP..=MAX_EXP).contains(&n_exp) {
            return Err(Error::Config(format!(
                "grid exponent {n_exp} outside [{MIN_EXP}, {MAX_EXP}]"
            )));
        }
        let len = 1usize << n_exp;
        Ok(Self {
            n_exp,
            len,
            eps: 2.0 * PI / len as f64,
        })
    }

    /// Grid with `len` points; `len` must be a power of two in range.
    pub fn with_len(len: usize) -> Result<Self> {
        if !len.is_power_of_two() {
            return Err(Error::Config(format!("grid size {len} is not a power of two")));
        }
        Self::new(len.trailing_zeros())
    }

    pub fn n_exp(&self) -> u32 {
        self.n_exp
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half(&self) -> i64 {
        (self.len / 2) as i64
    }

    /// Lattice spacing, also the time step of the walk.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Signed label of storage slot `i`.
    pub fn label(&self, i: usize) -> i64 {
        debug_assert!(i < self.len);
        if i < self.len / 2 {
            i as i64
        } else {
            i as i64 - self.len as i64
        }
    }

    /// Storage slot of signed label `p`, if in range.
    pub fn slot(&self, p: i64) -> Result<usize> {
        let half = self.half();
        if p < -half || p >= half {
            return Err(Error::ModeIndex { k: p, half });
        }
        Ok(self.slot_wrapped(p))
    }

    /// Storage slot of `p` reduced modulo `N`.
    pub fn slot_wrapped(&self, p: i64) -> usize {
        p.rem_euclid(self.len as i64) as usize
    }

    pub fn position(&self, i: usize) -> f64 {
        self.eps * self.label(i) as f64
    }

    /// Positions in storage order.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.position(i)).collect()
    }

    /// Storage slots sorted by increasing position (`p = -N/2 .. N/2-1`).
    pub fn ordered_slots(&self) -> impl Iterator<Item = usize> + '_ {
        let half = self.len / 2;
        (half..self.len).chain(0..half)
    }

    /// Slot holding `-p` for the point in slot `i` (periodic wrap, so
    /// `-N/2` maps to itself).
    pub fn mirror(&self, i: usize) -> usize {
        (self.len - i) % self.len
    }

    /// Number of walk steps for physical time `t`, `round(t / eps)`.
    pub fn steps_for_time(&self, t: f64) -> Result<usize> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Config(format!("time {t} must be finite and non-negative")));
        }
        Ok((t / self.eps).round() as usize)
    }

    pub fn time_for_steps(&self, steps: usize) -> f64 {
        steps as f64 * self.eps
    }
}

/// Construct the grid with `2^n_exp` points.
pub fn make_grid(n_exp: u32) -> Result<GridSpec> {
    GridSpec::new(n_exp)
}
