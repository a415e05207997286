mod config;
mod output;

use clap::{Parser, Subcommand};
use config::{ExperimentConfig, ExperimentKind};
use grainkin::experiments::{self, ExperimentOutput};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "grainkin",
    about = "Numerical laboratory for the 1D inelastic Boltzmann equation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a `key = value` config file.
    Run {
        /// Path to the configuration file.
        config: PathBuf,
        /// Override config entries, e.g. --set dt=0.02 (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// List the available experiments.
    List,
}

fn main() -> ExitCode {
    // GRAINKIN_THREADS caps internal parallelism.
    if let Ok(threads) = std::env::var("GRAINKIN_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            print!("{}", config::list_experiments());
            ExitCode::SUCCESS
        }
        Command::Run { config, set } => match run(&config, &set) {
            Ok(all_passed) => {
                if all_passed {
                    ExitCode::SUCCESS
                } else {
                    // Criterion failure: outputs were written, checks failed.
                    ExitCode::from(2)
                }
            }
            Err(msg) => {
                eprintln!("grainkin: {msg}");
                ExitCode::from(1)
            }
        },
    }
}

fn run(path: &PathBuf, overrides: &[String]) -> Result<bool, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut cfg = ExperimentConfig::parse(&text).map_err(|e| e.to_string())?;
    for item in overrides {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| format!("--set needs KEY=VALUE, got '{item}'"))?;
        cfg.assign(k.trim(), v.trim()).map_err(|e| e.to_string())?;
    }
    cfg.validate().map_err(|e| e.to_string())?;

    let dir = PathBuf::from(cfg.output_dir());
    let result: grainkin::Result<ExperimentOutput> = match cfg.experiment {
        ExperimentKind::Constants => experiments::constants(&cfg.constants()),
        ExperimentKind::MaxwellFourier => experiments::maxwell_fourier(&cfg.maxwell_fourier()),
        ExperimentKind::MaxwellPhysical => experiments::maxwell_physical(&cfg.maxwell_physical()),
        ExperimentKind::Profile => experiments::profile(&cfg.profile()),
        ExperimentKind::UniquenessProbe => experiments::uniqueness_probe(&cfg.uniqueness()),
        ExperimentKind::Gap => experiments::gap(&cfg.gap()),
    };
    match result {
        Ok(out) => {
            output::write_outputs(&dir, &out, &cfg.echo())
                .map_err(|e| format!("cannot write outputs to {}: {e}", dir.display()))?;
            for row in &out.report {
                let status = match row.pass {
                    Some(true) => "pass",
                    Some(false) => "FAIL",
                    None => "info",
                };
                println!("{:40} {:>24} [{}]", row.key, row.value, status);
            }
            Ok(out.all_passed())
        }
        Err(err) => {
            // Solver-level failure: record a diagnostic row and exit 1.
            let _ = std::fs::create_dir_all(&dir);
            let _ = std::fs::write(
                dir.join("report.csv"),
                format!("key,value,provenance,status\nerror,{err},oracle,fail\n"),
            );
            Err(err.to_string())
        }
    }
}
