//! `hdrqa`: command-line front end for HDR video quality experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or schema error (including
//! I/O), 3 numeric failure such as an undefined VIF.

mod analyze;
mod config;
mod display;
mod distort;
mod metric;
mod seqio;
mod session;
mod svg;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hdrqa_core::hdr_io::{dml_hdr_catalog, DatasetManifest};

use config::{
    AnalyzeArgs, DisplayArgs, DistortArgs, GlobalArgs, Job, ManifestCommand, MetricArgs, RunConfig, SessionArgs,
};

/// Bad invocation: exit code 1.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

/// Malformed input data: exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct DataError(pub String);

#[derive(Parser)]
#[command(name = "hdrqa", version, about = "Quality assessment tools for HDR video")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a synthetic impairment to a sequence.
    Distort(DistortArgs),
    /// Score a distorted sequence against its reference.
    Metric(MetricArgs),
    /// Simulate the dual-modulation display signals.
    DisplaySim(DisplayArgs),
    /// Screen subjects, compute MOS and correlate with objective scores.
    Analyze(AnalyzeArgs),
    /// Build a double-stimulus presentation plan.
    SessionPlan(SessionArgs),
    /// Dataset manifest utilities.
    #[command(subcommand)]
    Manifest(ManifestCommand),
    /// Re-run a command from its run.toml echo.
    Replay {
        /// Path to a run.toml written by an earlier run.
        echo: PathBuf,
    },
}

fn execute(mut config: RunConfig) -> Result<()> {
    if let Some(n) = config.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the worker pool")?;
    }
    let job = config.job.clone();
    match &job {
        Job::Distort(a) => distort::run(&mut config, a),
        Job::Metric(a) => metric::run(&config, a),
        Job::DisplaySim(a) => display::run(&config, a),
        Job::Analyze(a) => analyze::run(&config, a),
        Job::SessionPlan(a) => session::run(&mut config, a),
        Job::ManifestCatalog => {
            config.write_echo()?;
            let path = config.out("catalog.toml");
            fs::write(&path, dml_hdr_catalog().to_toml()).with_context(|| format!("writing {}", path.display()))?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn validate_manifest(path: &PathBuf) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let manifest = DatasetManifest::from_toml(&text).with_context(|| path.display().to_string())?;
    println!("{}: ok, {} sequences", path.display(), manifest.sequences.len());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let job = match cli.command {
        Command::Distort(a) => Job::Distort(a),
        Command::Metric(a) => Job::Metric(a),
        Command::DisplaySim(a) => Job::DisplaySim(a),
        Command::Analyze(a) => Job::Analyze(a),
        Command::SessionPlan(a) => Job::SessionPlan(a),
        Command::Manifest(ManifestCommand::Validate { path }) => return validate_manifest(&path),
        Command::Manifest(ManifestCommand::Catalog) => Job::ManifestCatalog,
        Command::Replay { echo } => {
            let mut config = RunConfig::load(&echo)?;
            // output location and pool size may change; nothing else does
            if let Some(dir) = cli.global.out_dir {
                config.out_dir = dir;
            }
            if cli.global.threads.is_some() {
                config.threads = cli.global.threads;
            }
            return execute(config);
        }
    };
    execute(RunConfig::new(&cli.global, job))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if cause.is::<DataError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<hdrqa_core::Error>() {
            return if e.is_numeric() {
                3
            } else if matches!(e, hdrqa_core::Error::InvalidParameter { .. }) {
                1
            } else {
                2
            };
        }
    }
    2
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_cause_chain() {
        let usage = anyhow::Error::new(UsageError("x".into())).context("outer");
        assert_eq!(exit_code(&usage), 1);
        assert_eq!(exit_code(&anyhow::Error::new(DataError("x".into()))), 2);
        assert_eq!(exit_code(&anyhow::Error::new(hdrqa_core::Error::VifUndefined).context("frame 3")), 3);
        let param = hdrqa_core::Error::InvalidParameter { name: "sigma", reason: "negative".into() };
        assert_eq!(exit_code(&anyhow::Error::new(param)), 1);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), 2);
    }
}
