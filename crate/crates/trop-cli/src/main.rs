//! `trop`: analyze a max-plus matrix, run randomized bound-verification
//! campaigns, or probe walk thresholds.
//!
//! Exit codes: 0 success / no anomalies, 1 anomaly found, 2 input error,
//! 3 iteration horizon exhausted.

mod analyze;
mod campaign;
mod pipeline;
mod thresholds_cmd;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use trop_core::TropError;

#[derive(Parser)]
#[command(name = "trop", version, about = "exact max-plus transient verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SchemeArg {
    #[value(alias = "N")]
    N,
    #[value(alias = "HA")]
    Ha,
    #[value(alias = "CT")]
    Ct,
    #[value(alias = "ALL")]
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one matrix file: profile, schemes, transients,
    /// bounds, verdicts.
    Analyze {
        /// Matrix file (JSON: rows, cols, entries)
        file: PathBuf,
        /// Scheme to analyze
        #[arg(long, value_enum, default_value = "all")]
        scheme: SchemeArg,
        /// Optional factorization file (JSON: u, l) enabling the rank bounds
        #[arg(long)]
        rank_file: Option<PathBuf>,
    },
    /// Randomized campaign: generate matrices, measure transients, verify
    /// every applicable bound, write CSV and JSON reports.
    Campaign(CampaignArgs),
    /// Walk thresholds of a subgraph: existence and reduction thresholds,
    /// exploration penalties, applicable closed-form bounds.
    Thresholds {
        /// Matrix file
        file: PathBuf,
        /// Subgraph: `critical`, `cycle:1,2,3`, or `nodes:1,2;arcs:1-2,2-1`
        /// (1-based node labels)
        #[arg(long)]
        subgraph: String,
        /// Length modulus
        #[arg(long)]
        sigma: u64,
    },
}

#[derive(Args)]
pub struct CampaignArgs {
    /// Matrix dimension
    #[arg(long)]
    pub dim: usize,
    /// Number of matrices
    #[arg(long)]
    pub samples: usize,
    /// Base seed; identical configuration and seed give byte-identical
    /// reports
    #[arg(long)]
    pub seed: u64,
    /// Force the digraph cyclicity
    #[arg(long)]
    pub gamma: Option<usize>,
    /// Force a factorization width (upper bound on the factor rank)
    #[arg(long)]
    pub rank: Option<usize>,
    /// Weight range `LO..HI` (rationals allowed, e.g. `-9/2..5`)
    #[arg(long, default_value = "-5..5", allow_hyphen_values = true)]
    pub weights: String,
    /// Sample non-integer rational weights
    #[arg(long)]
    pub rational_weights: bool,
    /// Arc density in (0, 1]
    #[arg(long, default_value_t = 0.55)]
    pub density: f64,
    /// Comma-separated scheme set: any of N, HA, CT, or `all`
    #[arg(long, default_value = "all")]
    pub scheme: String,
    /// Report prefix: writes `<prefix>.csv` and `<prefix>.json`
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Iteration horizon multiplier; the TROP_HORIZON_MULT environment
    /// variable overrides it
    #[arg(long, default_value_t = 1)]
    pub horizon_mult: u64,
}

fn env_horizon_mult() -> Option<u64> {
    std::env::var("TROP_HORIZON_MULT")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&m| m >= 1)
}

pub fn horizon_mult() -> u64 {
    env_horizon_mult().unwrap_or(1)
}

pub fn horizon_mult_or(base: u64) -> u64 {
    env_horizon_mult().unwrap_or(base.max(1))
}

fn exit_for(err: &TropError) -> u8 {
    match err {
        TropError::Horizon { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze {
            file,
            scheme,
            rank_file,
        } => analyze::run(&file, scheme, rank_file.as_deref()),
        Command::Campaign(args) => campaign::run(&args),
        Command::Thresholds {
            file,
            subgraph,
            sigma,
        } => thresholds_cmd::run(&file, &subgraph, sigma),
    };
    match outcome {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
