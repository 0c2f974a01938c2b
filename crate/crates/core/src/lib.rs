//! Discrete-time quantum walk simulation of charged relativistic fluids,
//! with a classical spectral reference path and an emulated hybrid
//! quantum-classical path.

pub mod diagnostics;
pub mod error;
pub mod field;
pub mod fourier;
pub mod grid;
pub mod hybrid;
pub mod hydro;
pub mod unitary;
pub mod walk;

pub use error::{Error, Result};
pub use field::{l2_norm, ModeSpectrum, Spinor, SpinorField};
pub use diagnostics::{
    charge_total, convergence_study, error_metrics, symmetry_defect, ConvergenceTable, ErrorReport,
};
pub use fourier::{dft_forward, dft_inverse, spectral_derivative};
pub use grid::{make_grid, GridSpec};
pub use hybrid::{run_hybrid, Backend, HybridConfig, HybridRun, NoiseModel};
pub use hydro::{
    bohm_potential, currents, madelung_fields, nonrel_residuals, shock_initial_condition,
    HydroFields, NonrelResiduals, ShockParams,
};
pub use unitary::Unitary2;
pub use walk::{
    coin_matrix, evolve_spectral, mode_propagator, shift_phases, CoinSchedule, WalkParams,
};
