use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qwhydro_cli::compare::compare_runs;
use qwhydro_cli::experiment::{simulate, write_artifacts};
use qwhydro_cli::{list_presets, preset, BackendKind, CliError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "qwhydro", version, about = "Quantum-walk simulations of charged relativistic shocks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML or JSON file.
    Run {
        config: PathBuf,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in preset.
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// classical, hybrid-ideal or hybrid-sampled
        #[arg(long)]
        backend: Option<String>,
        /// Print the preset as TOML instead of running it.
        #[arg(long)]
        print: bool,
    },
    /// Error report of run A (quantum) against run B (classical reference).
    Compare {
        run_a: PathBuf,
        run_b: PathBuf,
        /// Write errors_<name>.csv/json here as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List built-in presets.
    ListPresets,
}

fn execute(cfg: ExperimentConfig) -> Result<(), CliError> {
    let dir = cfg.output.directory.clone();
    let exp = simulate(&cfg)?;
    let files = write_artifacts(&exp, &dir)?;
    for s in exp.primary().snapshots.iter().map(|s| s.summary()) {
        println!(
            "t={:.6} steps={} charge={:.15} max_u={:.6} at x={:.6}",
            s.time, s.steps, s.charge_total, s.max_u_ratio, s.x_at_max_u_ratio
        );
    }
    for r in &exp.errors {
        println!("e1 mean={:.4}% max={:.4}%  e2 mean={:.3e}", r.e1_mean, r.e1_max, r.e2_mean);
    }
    println!("wrote {} files to {}", files.len(), dir.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(out) = out {
                cfg.output.directory = out;
            }
            execute(cfg)
        }
        Command::Preset { name, out, seed, backend, print } => {
            let mut cfg = preset(&name)?;
            if let Some(out) = out {
                cfg.output.directory = out;
            }
            if let Some(seed) = seed {
                cfg.hybrid.seed = seed;
            }
            if let Some(b) = backend {
                cfg.backend.kind = b.parse::<BackendKind>()?;
            }
            cfg.validate()?;
            if print {
                print!("{}", cfg.to_toml());
                return Ok(());
            }
            execute(cfg)
        }
        Command::Compare { run_a, run_b, out } => {
            let reports = compare_runs(&run_a, &run_b)?;
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            for (name, report) in &reports {
                println!(
                    "{name}: e1 mean={:.4}% max={:.4}% weighted={:.4}%  e2 mean={:.3e} max={:.3e}  masked={}",
                    report.e1_mean, report.e1_max, report.e1_weighted_mean, report.e2_mean, report.e2_max, report.masked
                );
                if let Some(dir) = &out {
                    let stem = name.trim_end_matches(".csv");
                    let csv_path = dir.join(format!("errors_{stem}.csv"));
                    let file = std::fs::File::create(&csv_path).map_err(|e| CliError::io(&csv_path, e))?;
                    report.write_csv(std::io::BufWriter::new(file)).map_err(|e| CliError::io(&csv_path, e))?;
                    let json_path = dir.join(format!("errors_{stem}.json"));
                    let text = serde_json::to_string_pretty(report)?;
                    std::fs::write(&json_path, text).map_err(|e| CliError::io(&json_path, e))?;
                }
            }
            Ok(())
        }
        Command::ListPresets => {
            for p in list_presets() {
                let flag = if p.long_running { " [long-running]" } else { "" };
                println!("{:<13} {}{}", p.name, p.description, flag);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
