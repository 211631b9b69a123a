//! `tiltstream`: streaming tilted-risk experiments.
//!
//! Subcommands reproduce the two reference experiments (robust regression
//! and outlier classification) and sweep the tilt hyperparameter, emitting
//! deterministic CSV, JSON, and SVG artifacts plus a manifest.

mod commands;
mod error;
mod output;
mod settings;
mod svg;

use clap::{Parser, Subcommand};

use settings::{RunArgs, SweepArgs};

#[derive(Parser)]
#[command(
    name = "tiltstream",
    version,
    about = "Streaming tilted-risk optimization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Robust linear regression on an outlier-contaminated stream
    Regress(RunArgs),
    /// Outlier detection in streaming binary classification
    Classify(RunArgs),
    /// One task across an ascending tilt grid at fixed optimizer and rate
    Sweep(SweepArgs),
}

fn main() {
    let command_line: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Regress(args) => commands::cmd_regress(args, command_line),
        Command::Classify(args) => commands::cmd_classify(args, command_line),
        Command::Sweep(args) => commands::cmd_sweep(args, command_line),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
