//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "razavy",
    version,
    about = "Bound-state spectra, Heun-series evaluation, and figure data for the Razavy bistable potential"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand; a JSON `--config` file may supply the
/// same keys (kebab-case), with flags taking precedence.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// Well-shape parameter m (integer, may be negative)
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i32>,
    /// Coupling xi (positive real)
    #[arg(long)]
    pub xi: Option<f64>,
    /// Number of levels to solve (1..=12)
    #[arg(long)]
    pub levels: Option<usize>,
    /// Level index for wavefunction emission (1..=12)
    #[arg(long)]
    pub level: Option<usize>,
    /// Solver backend: fd, numerov or heun-z
    #[arg(long)]
    pub backend: Option<String>,
    /// Half-width L of the solve domain [-L, L]
    #[arg(long = "half-width")]
    pub half_width: Option<f64>,
    /// Grid point count
    #[arg(long)]
    pub points: Option<usize>,
    /// Sector restriction: even, odd or full
    #[arg(long)]
    pub parity: Option<String>,
    /// Solver tolerance (or cell tolerance for table1)
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output format: csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Output path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HeunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Series argument z, |z| <= 0.95
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    /// Scaled energy eps entering the parameter map
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CheckTerminationArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Largest truncation order N to list (1..=20)
    #[arg(long = "n-max")]
    pub n_max: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the bound-state spectrum and emit CSV/JSON
    Solve(CommonArgs),
    /// Recompute the bundled reference table and report a cell-wise diff
    Table1(CommonArgs),
    /// Emit potential samples on a uniform grid
    Potential(CommonArgs),
    /// Emit normalized eigenfunction samples for one level
    Wavefunction(CommonArgs),
    /// Map (m, xi, eps) to confluent Heun parameters and sum the series
    Heun(HeunArgs),
    /// Audit the polynomial-termination conditions
    CheckTermination(CheckTerminationArgs),
}
