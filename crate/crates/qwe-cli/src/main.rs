//! `qwe` — batch commands over the quantum weight enumerator library.
//!
//! Every command writes a single JSON (or CSV) artifact that embeds the tool
//! version, the full command line, the seed, and the precision mode, so any
//! output can be reproduced bit-identically from its own metadata.

mod commands;
mod output;
mod parse;

use clap::{Parser, Subcommand};
use qwe_core::Error;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qwe", version, about = "quantum weight enumerator toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one of the nine enumerator transforms to a vector, or export a
    /// transform matrix.
    Transform(commands::TransformArgs),
    /// Exact enumerators of a state family or a stabilizer code.
    Enumerate(commands::EnumerateArgs),
    /// Simulate a two-copy Bell sampling experiment.
    Sample(commands::SampleArgs),
    /// Estimate all six enumerator vectors from Bell samples.
    Estimate(commands::EstimateArgs),
    /// Entanglement criteria, TPD structure, and (optionally) code distance.
    Analyze(commands::AnalyzeArgs),
    /// Sample-complexity planning: variance inversion and Hoeffding bounds.
    Plan(commands::PlanArgs),
    /// Noise thresholds of entanglement criteria over a range of n.
    Thresholds(commands::ThresholdsArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Transform(args) => commands::run_transform(args),
        Command::Enumerate(args) => commands::run_enumerate(args),
        Command::Sample(args) => commands::run_sample(args),
        Command::Estimate(args) => commands::run_estimate(args),
        Command::Analyze(args) => commands::run_analyze(args),
        Command::Plan(args) => commands::run_plan(args),
        Command::Thresholds(args) => commands::run_thresholds(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::ResourceLimit(_) => 3,
                Error::Io(_) | Error::Parse(_) => 4,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
