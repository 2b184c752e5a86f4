//! `parnewton` command-line harness.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 an unconverged
//! benchmark row or MPC step under `--strict`, 3 any other runtime failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use parnewton::harness::{
    emit_mpc_plotdata, emit_plotdata, read_records, run_benchmark, run_mpc, write_records, ConfigFile, RunConfig,
};
use parnewton::models::System;
use parnewton::Error;

#[derive(Parser, Debug)]
#[command(name = "parnewton", version, about = "Parallel-in-time Newton trajectory optimization harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Horizon-scaling benchmark; writes one CSV row per (horizon, repetition).
    Bench {
        #[command(flatten)]
        common: Common,
        /// Also write runtime_vs_horizon.csv into this directory.
        #[arg(long)]
        plotdata: Option<PathBuf>,
    },
    /// Closed-loop MPC simulation; writes the per-step log as CSV.
    Mpc {
        #[command(flatten)]
        common: Common,
        /// Initial plant state, comma separated (defaults to a tilted start).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
        /// Also write mpc_trajectory.csv into this directory.
        #[arg(long)]
        plotdata: Option<PathBuf>,
    },
    /// Aggregates a benchmark CSV into plot-ready tables.
    Plotdata {
        /// Benchmark CSV produced by `bench`.
        #[arg(long)]
        input: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "plotdata")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// pendulum | cartpole
    #[arg(long)]
    system: Option<String>,
    /// barrier | admm
    #[arg(long)]
    solver: Option<String>,
    /// sequential | parallel
    #[arg(long)]
    executor: Option<String>,
    /// Comma-separated horizon list, e.g. 20,50,100.
    #[arg(long, value_delimiter = ',')]
    horizons: Option<Vec<usize>>,
    /// Fixed step size in seconds (default: duration / N, or 0.01 for MPC).
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat TOML config file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exit with status 2 if any row or step failed to converge.
    #[arg(long)]
    strict: bool,
}

impl Common {
    fn resolve(&self, x0: Option<Vec<f64>>) -> parnewton::Result<RunConfig> {
        let mut file = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => ConfigFile::default(),
        };
        // flags overlay the file, then the merged set overlays the defaults
        macro_rules! overlay {
            ($($field:ident),*) => { $(if self.$field.is_some() { file.$field = self.$field.clone(); })* };
        }
        overlay!(system, solver, executor, horizons, dt, reps, seed, out);
        if x0.is_some() {
            file.initial_state = x0;
        }
        let system: System = file.system.as_deref().unwrap_or("pendulum").parse()?;
        let solver = file.solver.as_deref().unwrap_or("barrier").parse()?;
        let mut config = RunConfig::new(system, solver);
        config.apply_file(&file)?;
        config.validate()?;
        Ok(config)
    }
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidOption(_) => Failure::Config(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn output(path: Option<&Path>) -> parnewton::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(std::fs::File::create(p)?)
        }
        None => Box::new(std::io::stdout().lock()),
    })
}

/// Returns whether everything converged.
fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Bench { common, plotdata } => {
            let config = common.resolve(None)?;
            let records = run_benchmark(&config)?;
            write_records(&records, output(config.out.as_deref())?)?;
            if let Some(dir) = plotdata {
                for p in emit_plotdata(&records, &dir)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            let failed = records.iter().filter(|r| !r.converged).count();
            eprintln!("{} rows, {failed} unconverged", records.len());
            Ok(failed == 0 || !common.strict)
        }
        Command::Mpc { common, x0, plotdata } => {
            let config = common.resolve(x0)?;
            let log = run_mpc(&config)?;
            let mut w = csv::Writer::from_writer(output(config.out.as_deref())?);
            log.write_to(&mut w).map_err(Failure::from)?;
            w.flush().map_err(|e| Failure::Runtime(e.to_string()))?;
            if let Some(dir) = plotdata {
                eprintln!("wrote {}", emit_mpc_plotdata(&log, &dir)?.display());
            }
            let final_state: Vec<String> = log.final_state.iter().map(|v| format!("{v:.5}")).collect();
            eprintln!(
                "{} steps, {} unconverged, max |u| = {:.4}, final state [{}]",
                log.steps.len(),
                log.failed_steps(),
                log.max_abs_control(),
                final_state.join(", ")
            );
            Ok(log.failed_steps() == 0 || !common.strict)
        }
        Command::Plotdata { input, out } => {
            let records = read_records(&input)?;
            for p in emit_plotdata(&records, &out)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap's own usage status (2) would collide with --strict
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
