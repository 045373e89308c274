//! `shellspec`: command-line front end for the delta-shell spectral library.
//!
//! Jobs are described by a JSON config (`--config job.json`); the optional
//! subcommand must agree with the config's `command` field and exists so that
//! `shellspec selfcheck` works without a config file. Exit codes: 0 success,
//! 1 selfcheck failures, 2 config errors, 3 numerical failures.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod config;
mod jobs;
mod selfcheck;

use config::{config_err, CommandKind, JobConfig, JobError};

#[derive(Parser)]
#[command(
    name = "shellspec",
    version,
    about = "Spectra of two-dimensional Dirac operators with singular shell interactions"
)]
struct Cli {
    /// Path to the JSON job description.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory where artifact files are written (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads; falls back to SHELLSPEC_THREADS, then all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Residual tolerance overriding the scan's eigenvalue filter.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Closed-form essential-spectrum bands of the straight-line operator.
    Bands,
    /// Gap-eigenvalue scan of the boundary-integral operator on a curve.
    Scan,
    /// Variational bound-state certificate for weakly bent curves.
    Certify,
    /// Nonrelativistic-limit convergence experiment.
    Nonrel,
    /// Cross-module invariant suite.
    Selfcheck,
}

impl Command {
    fn kind(self) -> CommandKind {
        match self {
            Command::Bands => CommandKind::Bands,
            Command::Scan => CommandKind::Scan,
            Command::Certify => CommandKind::Certify,
            Command::Nonrel => CommandKind::Nonrel,
            Command::Selfcheck => CommandKind::Selfcheck,
        }
    }
}

fn resolve_threads(cli_threads: Option<usize>) -> Result<Option<usize>, JobError> {
    if let Some(t) = cli_threads {
        if t == 0 {
            return Err(config_err("--threads must be at least 1"));
        }
        return Ok(Some(t));
    }
    match std::env::var("SHELLSPEC_THREADS") {
        Ok(raw) => {
            let t: usize = raw
                .trim()
                .parse()
                .map_err(|_| config_err(format!("SHELLSPEC_THREADS is not a thread count: {raw:?}")))?;
            if t == 0 {
                return Err(config_err("SHELLSPEC_THREADS must be at least 1"));
            }
            Ok(Some(t))
        }
        Err(_) => Ok(None),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, JobError> {
    if let Some(t) = resolve_threads(cli.threads)? {
        // build_global errs only if a pool already exists; that pool wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }

    let cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
            JobConfig::parse(&text)?
        }
        None => {
            let Some(cmd) = cli.command else {
                return Err(config_err("nothing to do: pass --config PATH or a subcommand"));
            };
            JobConfig {
                command: cmd.kind(),
                params: None,
                curve: None,
                numerics: None,
                certificate: None,
            }
        }
    };
    if let Some(cmd) = cli.command {
        if cmd.kind() != cfg.command {
            return Err(config_err(format!(
                "subcommand {} disagrees with the config command {}",
                cmd.kind(),
                cfg.command
            )));
        }
    }

    std::fs::create_dir_all(&cli.out)
        .map_err(|e| config_err(format!("cannot create {}: {e}", cli.out.display())))?;

    match cfg.command {
        CommandKind::Bands => jobs::run_bands(&cfg, &cli.out)?,
        CommandKind::Scan => jobs::run_scan(&cfg, &cli.out, cli.tol)?,
        CommandKind::Certify => jobs::run_certify(&cfg, &cli.out)?,
        CommandKind::Nonrel => jobs::run_nonrel(&cfg, &cli.out)?,
        CommandKind::Selfcheck => {
            if !selfcheck::run() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(JobError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(JobError::Numerics(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
