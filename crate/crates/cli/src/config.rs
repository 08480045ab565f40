use std::path::PathBuf;

use serde::Serialize;
use tc_gamma::spectral::SolverOptions;
use tc_gamma::{ModelParams, Precision};

use crate::error::{CliError, Result};

/// Grid points are rounded to this many decimals so that `0.4 + 3·0.1` prints as `0.7`.
const GRID_DECIMALS: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionMode {
    Double,
    Extended,
}

impl From<PrecisionMode> for Precision {
    fn from(mode: PrecisionMode) -> Self {
        match mode {
            PrecisionMode::Double => Precision::Double,
            PrecisionMode::Extended => Precision::Extended,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    /// `T_c/g`.
    G,
    /// `T_c/(g/2π)`.
    #[value(name = "g_over_2pi")]
    GOver2pi,
}

impl Units {
    /// Converts `T_c/g` into the chosen unit.
    pub fn scale(self, tc_over_g: f64) -> f64 {
        match self {
            Units::G => tc_over_g,
            Units::GOver2pi => tc_over_g * 2.0 * std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputTarget {
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// A validated sweep over a `γ` grid and a list of truncation sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub gamma_grid: Vec<f64>,
    pub n_list: Vec<usize>,
    pub g: f64,
    pub tol: f64,
    pub precision_mode: PrecisionMode,
    pub units: Units,
    pub output: OutputTarget,
}

pub const DEFAULT_N_LIST: [usize; 5] = [1, 2, 3, 4, 400];

impl SweepConfig {
    pub fn validate(self) -> Result<Self> {
        if self.gamma_grid.is_empty() {
            return Err(invalid("the gamma grid is empty"));
        }
        for &gamma in &self.gamma_grid {
            ModelParams::new(gamma, self.g)?;
        }
        if self.n_list.is_empty() || self.n_list[0] == 0 {
            return Err(invalid("n-list entries must be at least 1"));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("n-list must be strictly increasing"));
        }
        check_tol(self.tol)?;
        Ok(self)
    }

    pub fn params(&self, gamma: f64) -> Result<ModelParams> {
        Ok(ModelParams::new(gamma, self.g)?)
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            precision: self.precision_mode.into(),
            ..SolverOptions::with_tol(self.tol)
        }
    }
}

pub fn check_tol(tol: f64) -> Result<()> {
    if (1e-15..=1e-6).contains(&tol) {
        Ok(())
    } else {
        Err(invalid(format!("tol must lie in [1e-15, 1e-6] (got {tol})")))
    }
}

/// `min, min+step, …` up to `max` inclusive, merged with `extra`, sorted and deduplicated.
pub fn gamma_grid(min: f64, max: f64, step: f64, extra: &[f64]) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return Err(invalid("gamma range must be finite"));
    }
    if min <= 0.0 {
        return Err(invalid(format!("gamma must be positive (got {min})")));
    }
    if step <= 0.0 || max < min {
        return Err(invalid("gamma-step must be positive and gamma-max >= gamma-min"));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    let scale = 10f64.powi(GRID_DECIMALS);
    let mut grid: Vec<f64> = (0..=count)
        .map(|k| ((min + k as f64 * step) * scale).round() / scale)
        .collect();
    for &gamma in extra {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(invalid(format!("gamma must be positive (got {gamma})")));
        }
        grid.push(gamma);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidArgument(msg.into())
}
