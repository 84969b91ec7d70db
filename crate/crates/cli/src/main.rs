// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! `orsim`: predictions, collapse-time tables, simulated runs, count
//! analysis, collapse-time fits and circuit export.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid input.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use orsim_core::experiment::REPLICATION_SHOTS;
use orsim_core::gravity::FIG1_SEPARATION;

#[derive(Parser, Debug)]
#[command(name = "orsim", version, about = "Partial-measurement collapse experiment simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the primaries' states after each protocol stage and the final
    /// readout probabilities.
    Predict {
        /// Protocol config (TOML); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Per-qubit calibration JSON overriding the config's noise.
        #[arg(long)]
        calibration: Option<PathBuf>,
        /// Also write the stage matrices as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Collapse times over a grid of bit counts and masses per bit.
    Table {
        /// Separation between the displaced mass configurations, m.
        #[arg(long, default_value_t = FIG1_SEPARATION)]
        sep: f64,
        /// Prefactor of the collapse time.
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Comma-separated bit counts.
        #[arg(long, value_delimiter = ',', default_values_t = orsim_core::gravity::FIG1_BITS)]
        bits: Vec<u32>,
        /// Comma-separated masses per bit, kg.
        #[arg(long, value_delimiter = ',', default_values_t = orsim_core::gravity::FIG1_MASSES)]
        masses: Vec<f64>,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample both arms and write `test.json` and `control.json`.
    Simulate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Shots per arm.
        #[arg(long, default_value_t = REPLICATION_SHOTS)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Repetitions, alternating the physical test/control assignment.
        #[arg(long, default_value_t = 2)]
        repetitions: u32,
        /// Output directory.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Two-proportion comparison of test and control counts.
    Analyze {
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        control: PathBuf,
        /// Delay in us; attaches a collapse-time fit when given.
        #[arg(long)]
        delay: Option<f64>,
        #[arg(long, value_enum, default_value_t = ReportKind::Markdown)]
        format: ReportKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Collapse time implied by test and control counts.
    Fit {
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        control: PathBuf,
        /// Delay in us.
        #[arg(long, default_value_t = 50.0)]
        delay: f64,
    },
    /// Export the protocol circuit.
    Export {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ExportFormat::Qasm)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportKind {
    Markdown,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Qasm,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Predict {
            config,
            calibration,
            csv,
        } => commands::predict(config.as_deref(), calibration.as_deref(), csv.as_deref()),
        Command::Table {
            sep,
            gamma,
            bits,
            masses,
            format,
            out,
        } => commands::table(sep, gamma, &bits, &masses, matches!(format, TableFormat::Csv), out.as_deref()),
        Command::Simulate {
            config,
            shots,
            seed,
            repetitions,
            out_dir,
        } => commands::simulate(config.as_deref(), shots, seed, repetitions, &out_dir),
        Command::Analyze {
            test,
            control,
            delay,
            format,
            out,
        } => {
            let format = match format {
                ReportKind::Markdown => orsim_core::experiment::ReportFormat::Markdown,
                ReportKind::Csv => orsim_core::experiment::ReportFormat::Csv,
                ReportKind::Svg => orsim_core::experiment::ReportFormat::Svg,
            };
            commands::analyze(&test, &control, delay, format, out.as_deref())
        }
        Command::Fit { test, control, delay } => commands::fit(&test, &control, delay),
        Command::Export { config, format, out } => {
            commands::export(config.as_deref(), matches!(format, ExportFormat::Json), out.as_deref())
        }
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("orsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
