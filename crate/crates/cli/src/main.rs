//! Command-line front end for `bosonic-capacity`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
//! 3 numerical failure.

mod commands;
mod figures;
mod output;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use bosonic_capacity::ToleranceConfig;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bosonic-capacity",
    version,
    about = "Capacities of the broadband lossy bosonic channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Debug, clap::Args)]
pub struct Global {
    /// Relative quadrature target; for `verify`, the tolerance of every anchor check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file (a directory for `figures`); stdout if omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Suppress progress and report lines on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

impl Global {
    fn numerics(&self) -> Result<ToleranceConfig> {
        commands::numerics(self.tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// C(η) with its linearization and the ζ = 1, 1/√η lower bounds.
    CeCurve(commands::CurveArgs),
    /// Full capacity report for one efficiency and power budget.
    Capacity(commands::CapacityArgs),
    /// Optimal photon allocation over a discrete set of modes.
    Allocate(commands::AllocateArgs),
    /// Single-mode rates for a Gaussian input state.
    SingleMode(commands::SingleModeArgs),
    /// Run the built-in anchor checks.
    Verify(verify::VerifyArgs),
    /// Write every figure dataset (CSV) and plot (SVG) into a directory.
    Figures(figures::FiguresArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerifyFailed,
    Numerical,
}

/// Marks an error as caused by the invocation rather than the numerics.
#[derive(Debug)]
pub struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Usage>() || cause.is::<std::io::Error>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<bosonic_capacity::Error>() {
            return if e.is_domain() { 2 } else { 3 };
        }
    }
    3
}

fn run(cli: &Cli) -> Result<Status> {
    let g = &cli.global;
    match &cli.command {
        Command::CeCurve(a) => commands::ce_curve(a, g),
        Command::Capacity(a) => commands::capacity(a, g),
        Command::Allocate(a) => commands::allocate(a, g),
        Command::SingleMode(a) => commands::single_mode(a, g),
        Command::Verify(a) => verify::verify(a, g),
        Command::Figures(a) => figures::figures(a, g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::VerifyFailed) => ExitCode::from(1),
        Ok(Status::Numerical) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
