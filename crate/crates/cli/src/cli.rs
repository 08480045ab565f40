use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Format, PrecisionMode, Units, DEFAULT_N_LIST};
use crate::verify::Level;

#[derive(Debug, Parser)]
#[command(name = "tc-gamma", version, about = "Rigorous T_c bounds for the Eliashberg gamma-model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form, numeric and upper bounds at one gamma.
    Bounds(BoundsArgs),
    /// Bounds over a gamma grid, written as CSV or JSON.
    Sweep(SweepArgs),
    /// The zeta-function upper bound at one gamma.
    Upper(PointArgs),
    /// The closed-form lower bounds for N = 1..4 at one gamma.
    ClosedForm(PointArgs),
    /// Runs the built-in checks.
    Verify {
        #[arg(value_enum, default_value = "fast")]
        level: Level,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Coupling constant; temperatures scale linearly with it.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub g: f64,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Relative residual tolerance of the eigen-solver.
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "double")]
    pub precision: PrecisionMode,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Unit of the tc_over_g column.
    #[arg(long, value_enum, default_value = "g")]
    pub units: Units,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Size of the numerically solved truncation.
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.4, allow_hyphen_values = true)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 3.1, allow_hyphen_values = true)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub gamma_step: f64,
    /// Additional gamma values merged into the grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub gamma_extra: Vec<f64>,
    /// Strictly increasing truncation sizes; N <= 4 uses the closed forms.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_N_LIST)]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub g: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
