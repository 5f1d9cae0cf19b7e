//! `mfsgl` command line: synthesize datasets, fit the solver, select
//! features, evaluate with k-means, and sweep parameter grids.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration/validation error,
//! 3 numeric failure.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mfsgl::Error;

#[derive(Parser)]
#[command(name = "mfsgl", version, about = "Multi-view feature selection with consensus graph learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic multi-view dataset
    Synth(commands::synth::SynthArgs),
    /// Fit the solver on a dataset described by a run config
    Fit(commands::fit::FitArgs),
    /// Keep the top-s features of a dataset according to a ranking file
    Select(commands::select::SelectArgs),
    /// Cluster a dataset with k-means and score it against its labels
    Eval(commands::eval::EvalArgs),
    /// Run the (k, gamma, s) grid and collect metrics per cell
    Sweep(commands::sweep::SweepArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(args) => commands::synth::run(args),
        Command::Fit(args) => commands::fit::run(args),
        Command::Select(args) => commands::select::run(args),
        Command::Eval(args) => commands::eval::run(args),
        Command::Sweep(args) => commands::sweep::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 1 for I/O problems, 2 for configuration and input validation, 3 for
/// numeric failures.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::FileMissing(_) | Error::Parse { .. } => 1,
        Error::DimensionMismatch { .. }
        | Error::NonFiniteValue { .. }
        | Error::InvalidLabels(_)
        | Error::InvalidMu(_)
        | Error::KTooLarge { .. }
        | Error::LengthMismatch { .. }
        | Error::InvalidCount { .. }
        | Error::InvalidConfig(_) => 2,
        Error::NotSymmetric { .. }
        | Error::ConvergenceFailure(_)
        | Error::EmptyClusterUnrecoverable
        | Error::DegenerateSingleCluster => 3,
    }
}
