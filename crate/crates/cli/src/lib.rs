//! Command-line front end wiring the measure library into reproducible
//! runs: scoring, the reference panel table, axiom verdicts, accuracy-
//! rejection curves, out-of-distribution AUROC, histograms, and synthetic
//! dataset generation.

pub mod cli;
pub mod commands;
pub mod config;
pub mod figure1;

use cli::{Cli, Command};
use config::RunConfig;
use std::fs;
use varuq::error::{Error, Result};

/// Execute a parsed invocation; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    let config = RunConfig::load(cli.config.as_deref())?;
    let seed = cli.seed.or_else(|| config.u64_opt("seed")).unwrap_or(0);
    let out = cli
        .out
        .or_else(|| config.path_opt("out"))
        .unwrap_or_else(|| ".".into());
    fs::create_dir_all(&out)?;
    match cli.command {
        Command::Measure(args) => commands::cmd_measure(args, &config, seed, &out),
        Command::Figure1(args) => commands::cmd_figure1(args, &config, seed, &out),
        Command::Axioms(args) => commands::cmd_axioms(args, &config, seed, &out),
        Command::Arc(args) => commands::cmd_arc(args, &config, seed, &out),
        Command::Ood(args) => commands::cmd_ood(args, &config, seed, &out),
        Command::Hist(args) => commands::cmd_hist(args, &config, seed, &out),
        Command::Synth(args) => commands::cmd_synth(args, &config, seed, &out),
    }
}

/// Exit code for a failed run: 2 for schema and usage problems (including
/// shape mismatches between flags and inputs), 1 for everything else.
pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::Schema { .. }
        | Error::UnknownMeasure(_)
        | Error::UnknownAxiom(_)
        | Error::DimensionMismatch { .. }
        | Error::InvalidParameter { .. } => 2,
        _ => 1,
    }
}
