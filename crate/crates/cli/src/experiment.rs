//! Running a configured experiment and writing its artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qwhydro_core::diagnostics::{charge_total, convergence_study, error_metrics, symmetry_defect};
use qwhydro_core::hybrid::{run_hybrid, ModeDiagnostics};
use qwhydro_core::hydro::{madelung_fields, nonrel_residuals_at, peak_width, shock_initial_condition};
use qwhydro_core::walk::{evolve_spectrum_with, CoinSchedule};
use qwhydro_core::{
    dft_forward, dft_inverse, ConvergenceTable, ErrorReport, GridSpec, HydroFields,
    NonrelResiduals, SpinorField,
};
use serde::Serialize;

use crate::config::{BackendKind, ExperimentConfig, OutputFormat};
use crate::error::{CliError, Result};

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub index: usize,
    pub requested_time: f64,
    pub steps: usize,
    pub field: SpinorField,
    pub hydro: HydroFields,
    /// Per-mode records for hybrid backends.
    pub modes: Option<Vec<ModeDiagnostics>>,
    pub seed: Option<u64>,
}

/// Scalar observables of one snapshot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotSummary {
    pub index: usize,
    pub requested_time: f64,
    pub steps: usize,
    pub time: f64,
    pub charge_total: f64,
    pub max_u_ratio: f64,
    pub x_at_max_u_ratio: f64,
    pub max_density: f64,
    pub x_at_max_density: f64,
    pub density_peak_width: f64,
    pub symmetry_defect: f64,
    pub vacuum_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub active_modes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unreliable_modes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Snapshot {
    pub fn summary(&self) -> SnapshotSummary {
        let grid = self.field.grid();
        let h = &self.hydro;
        let iu = h.velocity_argmax();
        let in_ = h.density_argmax();
        SnapshotSummary {
            index: self.index,
            requested_time: self.requested_time,
            steps: self.steps,
            time: grid.time_for_steps(self.steps),
            charge_total: charge_total(&self.field),
            max_u_ratio: h.u_ratio[iu],
            x_at_max_u_ratio: grid.position(iu),
            max_density: h.n[in_],
            x_at_max_density: grid.position(in_),
            density_peak_width: peak_width(grid, &h.n, in_),
            symmetry_defect: symmetry_defect(h),
            vacuum_points: h.vacuum_count(),
            active_modes: self.modes.as_ref().map(Vec::len),
            unreliable_modes: self
                .modes
                .as_ref()
                .map(|m| m.iter().filter(|d| !d.reliable).count()),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BackendRun {
    pub kind: BackendKind,
    pub snapshots: Vec<Snapshot>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonrelRow {
    pub n_exp: u32,
    pub len: usize,
    pub steps: usize,
    #[serde(flatten)]
    pub residuals: NonrelResiduals,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub grid: GridSpec,
    pub runs: Vec<BackendRun>,
    /// Hybrid against classical, one per snapshot.
    pub errors: Vec<ErrorReport>,
    pub nonrel: Vec<NonrelRow>,
    pub convergence: Option<ConvergenceTable>,
}

impl Experiment {
    pub fn run(&self, kind: BackendKind) -> Option<&BackendRun> {
        self.runs.iter().find(|r| r.kind == kind)
    }

    pub fn primary(&self) -> &BackendRun {
        &self.runs[0]
    }
}

fn requested_steps(grid: &GridSpec, times: &[f64]) -> Result<Vec<usize>> {
    times.iter().map(|&t| Ok(grid.steps_for_time(t)?)).collect()
}

fn run_classical(cfg: &ExperimentConfig, f0: &SpinorField) -> Result<BackendRun> {
    let grid = *f0.grid();
    let params = cfg.walk_params()?;
    let times = cfg.snapshot_times();
    let mut spec = dft_forward(f0);
    let mut done = 0;
    let mut snapshots = Vec::with_capacity(times.len());
    for (index, (&t, steps)) in times.iter().zip(requested_steps(&grid, &times)?).enumerate() {
        let schedule = CoinSchedule::starting_at(done, steps - done, &params, &grid);
        spec = evolve_spectrum_with(&spec, &schedule, None);
        done = steps;
        let field = dft_inverse(&spec);
        let hydro = madelung_fields(&field, params.mass);
        snapshots.push(Snapshot {
            index,
            requested_time: t,
            steps,
            field,
            hydro,
            modes: None,
            seed: None,
        });
    }
    Ok(BackendRun { kind: BackendKind::Classical, snapshots })
}

fn run_hybrid_backend(cfg: &ExperimentConfig, f0: &SpinorField) -> Result<BackendRun> {
    let grid = *f0.grid();
    let params = cfg.walk_params()?;
    let base = cfg.hybrid_config();
    let times = cfg.snapshot_times();
    let mut snapshots = Vec::with_capacity(times.len());
    for (index, (&t, steps)) in times.iter().zip(requested_steps(&grid, &times)?).enumerate() {
        let seed = base.seed.wrapping_add(index as u64);
        let hc = qwhydro_core::HybridConfig { seed, ..base };
        let run = run_hybrid(f0, steps, &params, &hc)?;
        let hydro = madelung_fields(&run.field, params.mass);
        snapshots.push(Snapshot {
            index,
            requested_time: t,
            steps,
            field: run.field,
            hydro,
            modes: Some(run.modes),
            seed: (cfg.backend.kind == BackendKind::HybridSampled).then_some(seed),
        });
    }
    Ok(BackendRun { kind: cfg.backend.kind, snapshots })
}

/// Run every backend, comparison and diagnostic requested by `cfg`.
pub fn simulate(cfg: &ExperimentConfig) -> Result<Experiment> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let params = cfg.walk_params()?;
    let sp = cfg.shock_params()?;
    let f0 = shock_initial_condition(&grid, &sp)?;

    let mut runs = Vec::new();
    if cfg.backend.kind.is_hybrid() {
        runs.push(run_hybrid_backend(cfg, &f0)?);
        if cfg.backend.compare_classical {
            runs.push(run_classical(cfg, &f0)?);
        }
    } else {
        runs.push(run_classical(cfg, &f0)?);
    }

    let mut errors = Vec::new();
    if runs.len() == 2 {
        for (q, c) in runs[0].snapshots.iter().zip(&runs[1].snapshots) {
            let report = error_metrics(&q.field, &c.field)?
                .with_metadata("quantum", runs[0].kind.label())
                .with_metadata("classical", "classical")
                .with_metadata("snapshot", q.index.to_string())
                .with_metadata("steps", q.steps.to_string());
            errors.push(report);
        }
    }

    let mut nonrel = Vec::new();
    for &e in &cfg.diagnostics.nonrel_n_exps {
        let g = GridSpec::new(e)?;
        let f = shock_initial_condition(&g, &sp)?;
        let residuals = nonrel_residuals_at(&f, cfg.time.t_final, &params)?;
        nonrel.push(NonrelRow {
            n_exp: e,
            len: g.len(),
            steps: g.steps_for_time(cfg.time.t_final)?,
            residuals,
        });
    }

    let convergence = match &cfg.diagnostics.convergence {
        Some(c) => Some(convergence_study(&params, &sp, c.time, &c.n_exps)?),
        None => None,
    };

    Ok(Experiment {
        config: cfg.clone(),
        grid,
        runs,
        errors,
        nonrel,
        convergence,
    })
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn create(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

/// Per-point fields in order of increasing `x`, physical units.
pub fn write_fields_csv(path: &Path, snap: &Snapshot) -> Result<()> {
    let grid = snap.field.grid();
    let values = snap.field.physical();
    let h = &snap.hydro;
    let mut w = create(path)?;
    w.write_record(["x", "re_l", "im_l", "re_r", "im_r", "n", "u_ratio", "j0", "j1", "w"])?;
    for i in grid.ordered_slots() {
        let v = values[i];
        w.write_record([
            num(grid.position(i)),
            num(v.l.re),
            num(v.l.im),
            num(v.r.re),
            num(v.r.im),
            num(h.n[i]),
            num(h.u_ratio[i]),
            num(h.j0[i]),
            num(h.j1[i]),
            num(h.w[i]),
        ])?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

fn write_spacetime_csv(path: &Path, run: &BackendRun) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["t", "x", "n", "u_ratio"])?;
    for s in &run.snapshots {
        let grid = s.field.grid();
        let t = num(grid.time_for_steps(s.steps));
        for i in grid.ordered_slots() {
            w.write_record([
                t.clone(),
                num(grid.position(i)),
                num(s.hydro.n[i]),
                num(s.hydro.u_ratio[i]),
            ])?;
        }
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[derive(Serialize)]
struct RunMetadata<'a> {
    backend: &'a str,
    snapshots: Vec<SnapshotSummary>,
}

#[derive(Serialize)]
struct ErrorSummary<'a> {
    snapshot: usize,
    e1_mean: f64,
    e1_max: f64,
    e1_weighted_mean: f64,
    e2_mean: f64,
    e2_max: f64,
    masked: usize,
    metadata: &'a BTreeMap<String, String>,
}

#[derive(Serialize)]
struct Metadata<'a> {
    name: Option<&'a str>,
    version: &'a str,
    grid: BTreeMap<&'a str, f64>,
    seed: u64,
    config: &'a ExperimentConfig,
    runs: Vec<RunMetadata<'a>>,
    errors: Vec<ErrorSummary<'a>>,
    nonrel: &'a [NonrelRow],
    convergence: Option<&'a ConvergenceTable>,
}

pub fn fields_file_name(kind: BackendKind, index: usize) -> String {
    format!("fields_{}_{index:03}.csv", kind.label())
}

/// Write every artifact of `exp` into `dir` and return the paths.
pub fn write_artifacts(exp: &Experiment, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let cfg = &exp.config;
    let mut written = Vec::new();
    let csv_on = cfg.wants(OutputFormat::Csv);
    let json_on = cfg.wants(OutputFormat::Json);

    for run in &exp.runs {
        for s in &run.snapshots {
            if csv_on {
                let p = dir.join(fields_file_name(run.kind, s.index));
                write_fields_csv(&p, s)?;
                written.push(p);
            }
            if let (Some(modes), true) = (&s.modes, json_on) {
                let p = dir.join(format!("modes_{}_{:03}.json", run.kind.label(), s.index));
                write_json(&p, modes)?;
                written.push(p);
            }
        }
        if csv_on && cfg.output.spacetime {
            let p = dir.join(format!("spacetime_{}.csv", run.kind.label()));
            write_spacetime_csv(&p, run)?;
            written.push(p);
        }
    }
    for (i, report) in exp.errors.iter().enumerate() {
        if csv_on {
            let p = dir.join(format!("errors_{i:03}.csv"));
            let file = fs::File::create(&p).map_err(|e| CliError::io(&p, e))?;
            report
                .write_csv(std::io::BufWriter::new(file))
                .map_err(|e| CliError::io(&p, e))?;
            written.push(p);
        }
        if json_on {
            let p = dir.join(format!("errors_{i:03}.json"));
            write_json(&p, report)?;
            written.push(p);
        }
    }

    let meta = Metadata {
        name: cfg.name.as_deref(),
        version: env!("CARGO_PKG_VERSION"),
        grid: BTreeMap::from([("len", exp.grid.len() as f64), ("eps", exp.grid.eps())]),
        seed: cfg.hybrid.seed,
        config: cfg,
        runs: exp
            .runs
            .iter()
            .map(|r| RunMetadata {
                backend: r.kind.label(),
                snapshots: r.snapshots.iter().map(Snapshot::summary).collect(),
            })
            .collect(),
        errors: exp
            .errors
            .iter()
            .enumerate()
            .map(|(i, r)| ErrorSummary {
                snapshot: i,
                e1_mean: r.e1_mean,
                e1_max: r.e1_max,
                e1_weighted_mean: r.e1_weighted_mean,
                e2_mean: r.e2_mean,
                e2_max: r.e2_max,
                masked: r.masked,
                metadata: &r.metadata,
            })
            .collect(),
        nonrel: &exp.nonrel,
        convergence: exp.convergence.as_ref(),
    };
    let p = dir.join("metadata.json");
    write_json(&p, &meta)?;
    written.push(p);

    let p = dir.join("config.toml");
    fs::write(&p, cfg.to_toml()).map_err(|e| CliError::io(&p, e))?;
    written.push(p);
    Ok(written)
}

/// `simulate` then `write_artifacts` into the configured directory.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<PathBuf> {
    let exp = simulate(cfg)?;
    write_artifacts(&exp, &cfg.output.directory)?;
    Ok(cfg.output.directory.clone())
}
