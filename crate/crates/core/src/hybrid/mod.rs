//! Hybrid classical-quantum evolution with emulated per-mode circuits.

pub mod circuits;
pub mod compress;
pub mod encoding;
pub mod phase;
pub mod runner;
pub mod tomography;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use circuits::{
    basis_rotation, exact_expectations, simulate_circuit_a, simulate_circuit_b,
    CircuitExpectations, NoiseModel,
};
pub use compress::{compress_spectrum, ActiveModes};
pub use encoding::{bloch_state, decompose_mode, wrap_phase, ModeEncoding};
pub use phase::{phase_from_overlap, recover_global_phase, PhaseEstimate};
pub use runner::{run_hybrid, HybridRun, ModeDiagnostics, ModeStderr};
pub use tomography::{
    estimate_bloch, Basis, BasisCounts, BlochEstimate, HadamardCounts, TomographyCounts,
};

/// How circuit outcomes are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Exact expectation values fed through the estimators, no sampling.
    Ideal,
    /// Binomial counts drawn from the emulated outcome probabilities.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridConfig {
    pub backend: Backend,
    /// Shots per measurement basis.
    pub shots: u64,
    pub noise: NoiseModel,
    /// Minimum `|<k0|psi_T>|` for a trusted global-phase estimate.
    pub overlap_threshold: f64,
    pub seed: u64,
    pub compression: bool,
    /// Relative amplitude threshold used when compression is on.
    pub tau: f64,
}

impl Default for HybridConfig {
    fn default() -> Self {
        Self {
            backend: Backend::Sampled,
            shots: 8096,
            noise: NoiseModel::noiseless(),
            overlap_threshold: 0.1,
            seed: 0,
            compression: false,
            tau: 1e-13,
        }
    }
}

impl HybridConfig {
    pub fn ideal() -> Self {
        Self {
            backend: Backend::Ideal,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Config("shots per basis must be >= 1".into()));
        }
        if !self.tau.is_finite() || self.tau < 0.0 {
            return Err(Error::Config(format!("compression threshold {} must be >= 0", self.tau)));
        }
        if !self.overlap_threshold.is_finite() || self.overlap_threshold < 0.0 {
            return Err(Error::Config(format!(
                "overlap threshold {} must be >= 0",
                self.overlap_threshold
            )));
        }
        self.noise.validate()
    }

    /// Effective relative threshold: `tau` with compression on, else 0.
    pub fn effective_tau(&self) -> f64 {
        if self.compression {
            self.tau
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(HybridConfig::default().validate().is_ok());
        let bad = HybridConfig { shots: 0, ..HybridConfig::default() };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        let bad = HybridConfig { tau: -1.0, ..HybridConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn config_serde_round_trip() {
        let c = HybridConfig {
            noise: NoiseModel::nisq_like(),
            compression: true,
            ..HybridConfig::ideal()
        };
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"ideal\""));
        let back: HybridConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
