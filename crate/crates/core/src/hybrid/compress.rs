//! Fourier-space compression: only modes with non-negligible initial
//! amplitude are sent through the circuits.

use serde::{Deserialize, Serialize};

use super::HybridConfig;
use crate::error::{Error, Result};
use crate::field::ModeSpectrum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActiveModes {
    /// Active flag per storage slot.
    pub mask: Vec<bool>,
    /// Active labels in ascending order.
    pub labels: Vec<i64>,
    /// Absolute amplitude cut `tau * max |psi_k|`.
    pub cutoff: f64,
}

impl ActiveModes {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, k: i64) -> bool {
        self.labels.binary_search(&k).is_ok()
    }

    /// Largest `|k|` kept.
    pub fn max_abs_label(&self) -> i64 {
        self.labels.iter().map(|k| k.abs()).max().unwrap_or(0)
    }
}

/// Modes with `|psi_k| > tau * max_k |psi_k|`, where `tau` is the
/// configured threshold when compression is on and 0 otherwise.
pub fn compress_spectrum(spec: &ModeSpectrum, cfg: &HybridConfig) -> Result<ActiveModes> {
    let norms: Vec<f64> = spec.values().iter().map(|v| v.norm()).collect();
    let max = norms.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::Degenerate("spectrum has no nonzero mode".into()));
    }
    let cutoff = cfg.effective_tau() * max;
    let grid = spec.grid();
    let mask: Vec<bool> = norms.iter().map(|&a| a > cutoff).collect();
    let mut labels: Vec<i64> = mask
        .iter()
        .enumerate()
        .filter(|(_, &on)| on)
        .map(|(i, _)| grid.label(i))
        .collect();
    labels.sort_unstable();
    Ok(ActiveModes {
        mask,
        labels,
        cutoff,
    })
}
