//! Built-in experiment configurations.

use std::path::PathBuf;

use serde::Serialize;

use crate::config::{
    BackendKind, BackendSection, ConvergenceSection, DiagnosticsSection, ExperimentConfig,
    GridSection, HybridSection, NoisePreset, NoiseSection, OutputSection, PhysicsSection,
    TimeSection,
};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PresetInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub long_running: bool,
}

pub const PRESETS: [PresetInfo; 7] = [
    PresetInfo {
        name: "fig2",
        description: "shock profiles at t = 0, 2.2, 4.8 with E=16, q=-1, m=64, u_max=0.55, N=4096",
        long_running: false,
    },
    PresetInfo {
        name: "fig3-E0",
        description: "symmetric shock, E=0",
        long_running: false,
    },
    PresetInfo {
        name: "fig3-E8",
        description: "shock drifting in a field, E=8",
        long_running: false,
    },
    PresetInfo {
        name: "fig3-E12",
        description: "shock drifting in a field, E=12",
        long_running: false,
    },
    PresetInfo {
        name: "fig4",
        description: "hybrid N=32 shock at t=1.96 with shot noise, compared against the classical path",
        long_running: false,
    },
    PresetInfo {
        name: "fig5",
        description: "ultra-relativistic shock on N=2^17 with Fourier compression, t=2.5",
        long_running: true,
    },
    PresetInfo {
        name: "nonrel-check",
        description: "slow heavy shock (m=256, u_max=0.05, E=0) for non-relativistic residuals at t=0.5",
        long_running: false,
    },
];

pub fn list_presets() -> &'static [PresetInfo] {
    &PRESETS
}

fn physics(m: f64, e: f64, u_max: f64) -> PhysicsSection {
    PhysicsSection { m, q: -1.0, e, u_max, n0: 1.0 }
}

fn classical() -> BackendSection {
    BackendSection { kind: BackendKind::Classical, compare_classical: false }
}

fn tenths(upto: u32) -> Vec<f64> {
    (0..=upto).map(|i| i as f64 / 10.0).collect()
}

fn base(name: &str, n_exp: u32, physics: PhysicsSection, time: TimeSection, backend: BackendSection) -> ExperimentConfig {
    ExperimentConfig {
        name: Some(name.to_string()),
        grid: GridSection { n_exp },
        physics,
        time,
        backend,
        hybrid: HybridSection::default(),
        output: OutputSection {
            directory: PathBuf::from(format!("out/{name}")),
            ..OutputSection::default()
        },
        diagnostics: DiagnosticsSection::default(),
    }
}

fn fig3(name: &str, e: f64) -> ExperimentConfig {
    base(
        name,
        12,
        physics(64.0, e, 0.55),
        TimeSection { t_final: 4.8, snapshot_times: tenths(48) },
        classical(),
    )
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let cfg = match name {
        "fig2" => {
            let mut c = base(
                name,
                12,
                physics(64.0, 16.0, 0.55),
                TimeSection { t_final: 4.8, snapshot_times: vec![0.0, 2.2, 4.8] },
                classical(),
            );
            c.diagnostics.convergence = Some(ConvergenceSection { time: 1.0, n_exps: vec![10, 11, 12] });
            c
        }
        "fig3-E0" => fig3(name, 0.0),
        "fig3-E8" => fig3(name, 8.0),
        "fig3-E12" => fig3(name, 12.0),
        "fig4" => {
            let mut c = base(
                name,
                5,
                physics(6.0, 0.6, 0.92),
                TimeSection { t_final: 1.96, snapshot_times: vec![0.0, 1.96] },
                BackendSection { kind: BackendKind::HybridSampled, compare_classical: true },
            );
            c.hybrid.shots = 8096;
            c.hybrid.seed = 1;
            c.hybrid.noise = Some(NoiseSection {
                preset: Some(NoisePreset::None),
                depolarizing_per_gate: None,
                readout_flip: None,
            });
            c
        }
        "fig5" => {
            let mut c = base(
                name,
                17,
                physics(6.0, 2.0, 0.92),
                TimeSection { t_final: 2.5, snapshot_times: vec![2.5] },
                BackendSection { kind: BackendKind::HybridIdeal, compare_classical: true },
            );
            c.hybrid.compression = true;
            c.hybrid.tau = 1e-13;
            c.output.spacetime = false;
            c
        }
        "nonrel-check" => {
            let mut c = base(
                name,
                10,
                physics(256.0, 0.0, 0.05),
                TimeSection { t_final: 0.5, snapshot_times: vec![0.0, 0.5] },
                classical(),
            );
            c.diagnostics.nonrel_n_exps = vec![10, 11, 12];
            c
        }
        other => {
            let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
            return Err(CliError::Config(format!(
                "unknown preset `{other}`; available: {}",
                names.join(", ")
            )));
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_preset_builds() {
        assert!(list_presets().len() >= 7);
        for p in list_presets() {
            let c = preset(p.name).unwrap();
            assert_eq!(c.name.as_deref(), Some(p.name));
        }
    }

    #[test]
    fn descriptions_and_flags() {
        let e0 = list_presets().iter().find(|p| p.name == "fig3-E0").unwrap();
        assert_eq!(e0.description, "symmetric shock, E=0");
        let f5 = list_presets().iter().find(|p| p.name == "fig5").unwrap();
        assert!(f5.long_running);
    }

    #[test]
    fn preset_parameters() {
        let c = preset("fig2").unwrap();
        assert_eq!(c.grid.n_exp, 12);
        assert_eq!((c.physics.m, c.physics.q, c.physics.e, c.physics.u_max), (64.0, -1.0, 16.0, 0.55));
        assert_eq!(c.snapshot_times(), vec![0.0, 2.2, 4.8]);
        let c = preset("fig5").unwrap();
        assert_eq!(c.grid.n_exp, 17);
        assert!(c.hybrid.compression);
        assert_eq!(c.backend.kind, BackendKind::HybridIdeal);
        let c = preset("fig3-E8").unwrap();
        assert!(c.snapshot_times().contains(&2.2));
    }

    #[test]
    fn unknown_preset_is_config_error() {
        assert_eq!(preset("fig9").unwrap_err().exit_code(), 2);
    }
}
