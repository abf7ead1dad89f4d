//! Command-line harness: JSON experiment configs in, CSV/JSONL results and a
//! manifest out.
//!
//! Exit codes: 0 on success, 1 on configuration or I/O errors, 2 when
//! `verify` reports a violated bound.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use commands::Context;
use config::ExperimentConfig;
use output::{Manifest, Staging};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] percolab_core::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "percolab",
    version,
    about = "Bond percolation experiments on finite windows"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, env = "PERCOLAB_WORKERS")]
    pub workers: Option<usize>,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Raw per-sample statistics as JSON lines (samples.jsonl).
    Simulate(RunArgs),
    /// Estimates with confidence intervals (results.csv).
    Estimate(RunArgs),
    /// Isoperimetric profiles (profile.csv).
    Profile(RunArgs),
    /// Bound checks and identities (verdicts.csv); exit 2 on a violation.
    Verify(RunArgs),
    /// Plot-ready tail data from a run directory (report.csv).
    Report {
        /// Directory holding results.csv from `estimate`.
        #[arg(long)]
        run: PathBuf,
        /// Where to write report.csv; defaults to the run directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "PERCOLAB_WORKERS")]
        workers: Option<usize>,
    },
}

/// What a successful command produced.
#[derive(Debug)]
pub struct Outcome {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
    pub violations: usize,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.violations > 0 {
            2
        } else {
            0
        }
    }
}

fn load(args: &RunArgs) -> Result<(ExperimentConfig, PathBuf, Option<usize>), CliError> {
    let mut config = config::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let out = args
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .ok_or_else(|| {
            CliError::Config("no output directory: pass --out or set `output_dir`".into())
        })?;
    let workers = args.workers.or(config.workers);
    if workers == Some(0) {
        return Err(CliError::Config("--workers must be at least 1".into()));
    }
    Ok((config, out, workers))
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn run_config(name: &str, args: &RunArgs) -> Result<Outcome, CliError> {
    let (config, out, workers) = load(args)?;
    let ctx = Context::new(config)?;
    let manifest = Manifest::start(&ctx.hash, name);
    let mut staging = Staging::new(&out)?;
    let mut violations = 0;
    in_pool(workers, || -> Result<(), CliError> {
        match name {
            "simulate" => {
                commands::simulate(&ctx, &mut staging, "samples.jsonl")?;
            }
            "estimate" => staging.write_csv("results.csv", &commands::estimate(&ctx)?)?,
            "profile" => staging.write_csv("profile.csv", &commands::profile(&ctx)?)?,
            "verify" => {
                let rows = commands::verify(&ctx)?;
                violations = rows.iter().filter(|r| r.verdict == "violated").count();
                staging.write_csv("verdicts.csv", &rows)?;
            }
            other => unreachable!("unknown command {other}"),
        }
        Ok(())
    })??;
    let manifest = staging.commit(manifest)?;
    Ok(Outcome {
        out_dir: out,
        manifest,
        violations,
    })
}

fn run_report(run: &Path, out: Option<&Path>, workers: Option<usize>) -> Result<Outcome, CliError> {
    let out = out.unwrap_or(run).to_path_buf();
    let (rows, hash) = in_pool(workers, || commands::report(run))??;
    let manifest = Manifest::start(&hash, "report");
    let mut staging = Staging::new(&out)?;
    staging.write_csv("report.csv", &rows)?;
    let manifest = staging.commit(manifest)?;
    Ok(Outcome {
        out_dir: out,
        manifest,
        violations: 0,
    })
}

/// Runs a parsed command.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Simulate(a) => run_config("simulate", a),
        Command::Estimate(a) => run_config("estimate", a),
        Command::Profile(a) => run_config("profile", a),
        Command::Verify(a) => run_config("verify", a),
        Command::Report { run, out, workers } => run_report(run, out.as_deref(), *workers),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Messages go to stderr.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            if outcome.violations > 0 {
                eprintln!(
                    "{} violated verdict(s); see {}",
                    outcome.violations,
                    outcome.out_dir.join("verdicts.csv").display()
                );
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
