//! Command-line front end: scenario files in, CSV files out.
//!
//! ```text
//! ris-select run <scenario.toml> -o out.csv [--trials N] [--seed S] [--k K] [--workers W]
//! ris-select bounds <scenario.toml> -o bounds.csv [--trials N] [--seed S]
//! ```

mod output;
mod scenario;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use output::{
    bounds_rows, output_paths, run, run_bounds, write_bounds_csv, write_curve_csv, BoundsRow,
};
pub use scenario::{load_scenario, parse_scenario, BoundsSpec, Scenario, ScenarioFile, SweepSpec};

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "ris-select",
    version,
    about = "Outage sweeps and feasibility bounds for grouped RIS links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the scenario's variable and write analytic and empirical outage.
    Run(CommonArgs),
    /// Draw channel realisations and write the feasible splitting ranges.
    Bounds(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scenario file (TOML).
    pub scenario: PathBuf,
    /// Output CSV path.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Monte Carlo trials (or channel draws for `bounds`).
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rank of the scheduled group.
    #[arg(long)]
    pub k: Option<usize>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

fn load_with(args: &CommonArgs) -> Result<Scenario> {
    load_scenario(&args.scenario)?.with_overrides(args.trials, args.seed, args.k, args.workers)
}

/// Runs a parsed command line and returns the files written.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    match &cli.command {
        Command::Run(args) => run(&load_with(args)?, &args.output),
        Command::Bounds(args) => {
            run_bounds(&load_with(args)?, &args.output)?;
            Ok(vec![args.output.clone()])
        }
    }
}
