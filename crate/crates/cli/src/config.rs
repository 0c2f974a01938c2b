//! Experiment configuration, read from TOML or JSON.

use std::path::{Path, PathBuf};

use qwhydro_core::{GridSpec, HybridConfig, NoiseModel, ShockParams, WalkParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    Classical,
    HybridIdeal,
    HybridSampled,
}

impl BackendKind {
    pub fn label(self) -> &'static str {
        match self {
            BackendKind::Classical => "classical",
            BackendKind::HybridIdeal => "hybrid-ideal",
            BackendKind::HybridSampled => "hybrid-sampled",
        }
    }

    pub fn is_hybrid(self) -> bool {
        self != BackendKind::Classical
    }
}

impl std::str::FromStr for BackendKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(BackendKind::Classical),
            "hybrid-ideal" => Ok(BackendKind::HybridIdeal),
            "hybrid-sampled" => Ok(BackendKind::HybridSampled),
            other => Err(CliError::Config(format!(
                "unknown backend `{other}` (expected classical, hybrid-ideal or hybrid-sampled)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n_exp: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    pub m: f64,
    pub q: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub u_max: f64,
    #[serde(default = "one")]
    pub n0: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_final: f64,
    /// Defaults to `[t_final]`.
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendSection {
    pub kind: BackendKind,
    /// Also run the classical path and emit error reports.
    #[serde(default)]
    pub compare_classical: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoisePreset {
    None,
    NisqLike,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    #[serde(default)]
    pub preset: Option<NoisePreset>,
    /// Explicit probabilities; override the preset when given.
    #[serde(default)]
    pub depolarizing_per_gate: Option<f64>,
    #[serde(default)]
    pub readout_flip: Option<f64>,
}

impl NoiseSection {
    pub fn model(&self) -> NoiseModel {
        let base = match self.preset {
            Some(NoisePreset::NisqLike) => NoiseModel::nisq_like(),
            Some(NoisePreset::None) | None => NoiseModel::noiseless(),
        };
        let explicit = self.depolarizing_per_gate.is_some() || self.readout_flip.is_some();
        NoiseModel {
            depolarizing_per_gate: self.depolarizing_per_gate.unwrap_or(base.depolarizing_per_gate),
            readout_flip: self.readout_flip.unwrap_or(base.readout_flip),
            enabled: base.enabled || explicit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HybridSection {
    #[serde(rename = "M", default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub noise: Option<NoiseSection>,
    #[serde(default = "default_threshold")]
    pub overlap_threshold: f64,
    #[serde(default)]
    pub compression: bool,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_shots() -> u64 {
    8096
}

fn default_threshold() -> f64 {
    0.1
}

fn default_tau() -> f64 {
    1e-13
}

impl Default for HybridSection {
    fn default() -> Self {
        Self {
            shots: default_shots(),
            noise: None,
            overlap_threshold: default_threshold(),
            compression: false,
            tau: default_tau(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub directory: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
    /// Long-form `t,x,n,u_ratio` table over all snapshots.
    #[serde(default = "yes")]
    pub spacetime: bool,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}

fn yes() -> bool {
    true
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: default_dir(),
            formats: default_formats(),
            spacetime: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSection {
    pub time: f64,
    pub n_exps: Vec<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSection {
    /// Grid exponents at which non-relativistic residuals are evaluated at `t_final`.
    #[serde(default)]
    pub nonrel_n_exps: Vec<u32>,
    #[serde(default)]
    pub convergence: Option<ConvergenceSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub grid: GridSection,
    pub physics: PhysicsSection,
    pub time: TimeSection,
    pub backend: BackendSection,
    #[serde(default)]
    pub hybrid: HybridSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
}

impl ExperimentConfig {
    /// Parse TOML or JSON; JSON is recognised by a leading `{`.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("JSON: {e}")))?
        } else {
            toml::from_str(text).map_err(|e| CliError::Config(format!("TOML: {e}")))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn grid(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(self.grid.n_exp)?)
    }

    pub fn walk_params(&self) -> Result<WalkParams> {
        Ok(WalkParams::new(self.physics.m, self.physics.q, self.physics.e)?)
    }

    pub fn shock_params(&self) -> Result<ShockParams> {
        let sp = ShockParams {
            u_max: self.physics.u_max,
            mass: self.physics.m,
            n0: self.physics.n0,
        };
        sp.validate()?;
        Ok(sp)
    }

    pub fn hybrid_config(&self) -> HybridConfig {
        let h = &self.hybrid;
        HybridConfig {
            backend: match self.backend.kind {
                BackendKind::HybridIdeal => qwhydro_core::Backend::Ideal,
                _ => qwhydro_core::Backend::Sampled,
            },
            shots: h.shots,
            noise: h.noise.as_ref().map(NoiseSection::model).unwrap_or_default(),
            overlap_threshold: h.overlap_threshold,
            seed: h.seed,
            compression: h.compression,
            tau: h.tau,
        }
    }

    /// Snapshot times, defaulting to `[t_final]`.
    pub fn snapshot_times(&self) -> Vec<f64> {
        if self.time.snapshot_times.is_empty() {
            vec![self.time.t_final]
        } else {
            self.time.snapshot_times.clone()
        }
    }

    pub fn wants(&self, f: OutputFormat) -> bool {
        self.output.formats.contains(&f)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.walk_params()?;
        self.shock_params()?;
        let t = self.time.t_final;
        if !t.is_finite() || t < 0.0 {
            return Err(CliError::Config(format!("time.t_final = {t} must be >= 0")));
        }
        for &s in &self.time.snapshot_times {
            if !(0.0..=t).contains(&s) {
                return Err(CliError::Config(format!(
                    "snapshot time {s} lies outside [0, t_final = {t}]"
                )));
            }
        }
        if self.time.snapshot_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(CliError::Config("snapshot_times must be non-decreasing".into()));
        }
        if self.backend.kind.is_hybrid() {
            self.hybrid_config().validate()?;
        }
        for &e in &self.diagnostics.nonrel_n_exps {
            GridSpec::new(e)?;
        }
        if let Some(c) = &self.diagnostics.convergence {
            if c.n_exps.len() < 3 {
                return Err(CliError::Config(
                    "diagnostics.convergence needs at least 3 grid exponents".into(),
                ));
            }
            if !c.time.is_finite() || c.time < 0.0 {
                return Err(CliError::Config(format!("convergence time {} must be >= 0", c.time)));
            }
        }
        Ok(())
    }
}
