//! `discstat`: runs the slice-disc verification pipeline from a config file.
//!
//! Exit codes: 0 pass, 1 assertion failure, 2 configuration error,
//! 3 numerical-method failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] discstat::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "discstat",
    version,
    about = "Stationarity checks for slice discs of prepared hypersurfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML experiment config; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `[output] dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Angular grid size (power of two).
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    tmin: Option<f64>,
    #[arg(long, global = true)]
    tmax: Option<f64>,
    #[arg(long, global = true)]
    tpoints: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Pang weight and moment residuals over the t grid; passes iff all vanish.
    SphereCheck,
    /// Numeric vs symbolic polar radius of the rescaled slices.
    LemmaPolar,
    /// Moment integrals and the corrected mu_2^Z over the t grid.
    MomentScan,
    /// Symbolic obstruction at order t^4, with a linearity table.
    Obstruction,
    /// Recover A from the numeric pipeline.
    EstimateA,
    /// Seeded agreement suite of the moment and Cauchy-transform tests.
    CauchyOracle,
}

fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    let overrides = Overrides {
        out: cli.out.clone(),
        n: cli.n,
        t_min: cli.tmin,
        t_max: cli.tmax,
        t_points: cli.tpoints,
    };
    let cfg = ExperimentConfig::load(cli.config.as_deref(), &overrides)?;
    match cli.command {
        Command::SphereCheck => commands::sphere_check(&cfg),
        Command::LemmaPolar => commands::lemma_polar(&cfg),
        Command::MomentScan => commands::moment_scan(&cfg),
        Command::Obstruction => commands::obstruction(&cfg),
        Command::EstimateA => commands::estimate(&cfg),
        Command::CauchyOracle => commands::cauchy_oracle(&cfg, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
