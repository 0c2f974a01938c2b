//! Experiment runner: configuration, built-in presets, artifact output and
//! run comparison.

pub mod compare;
pub mod config;
pub mod error;
pub mod experiment;
pub mod presets;

pub use config::{BackendKind, ExperimentConfig};
pub use error::{CliError, Result};
pub use experiment::{run_experiment, simulate, write_artifacts, Experiment};
pub use presets::{list_presets, preset, PresetInfo};
