use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use tc_gamma::closed_form::{eig_max_2, eig_max_3, eig_max_4};
use tc_gamma::spectral::{lower_bound, tc_from_eigenvalue, SolverOptions};
use tc_gamma::upper::{eigenvalue_upper, tc_upper};
use tc_gamma::ModelParams;

use crate::config::{SweepConfig, Units};
use crate::error::{CliError, Result};

/// Largest truncation with a closed-form spectrum.
pub const MAX_CLOSED: usize = 4;

/// Row label; the derived order is the output order within one `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Closed(usize),
    Numeric(usize),
    Upper,
}

impl Label {
    /// Closed form for `n ≤ 4`, numeric solve otherwise.
    pub fn for_truncation(n: usize) -> Self {
        if n <= MAX_CLOSED {
            Label::Closed(n)
        } else {
            Label::Numeric(n)
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Closed(n) => write!(f, "closed{n}"),
            Label::Numeric(n) => write!(f, "numericN{n}"),
            Label::Upper => f.write_str("upper"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One line of output. `tc_over_g` is in the configured units; closed-form and upper
/// rows carry zero residual and zero iterations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub gamma: f64,
    pub label: Label,
    pub tc_over_g: f64,
    pub lambda_max: f64,
    pub residual: f64,
    pub iterations: usize,
}

fn exact_row(params: &ModelParams, label: Label, lambda: f64, units: Units) -> Row {
    Row {
        gamma: params.gamma(),
        label,
        tc_over_g: units.scale(tc_from_eigenvalue(params, lambda) / params.g()),
        lambda_max: lambda,
        residual: 0.0,
        iterations: 0,
    }
}

/// `𝔤^(n)` for `n ≤ 4` from the closed forms.
pub fn closed_eigenvalue(gamma: f64, n: usize) -> Result<f64> {
    Ok(match n {
        1 => 1.0,
        2 => eig_max_2(gamma)?,
        3 => eig_max_3(gamma)?,
        4 => eig_max_4(gamma)?,
        _ => {
            return Err(CliError::InvalidArgument(format!(
                "no closed form for N = {n}"
            )))
        }
    })
}

pub fn closed_row(params: &ModelParams, n: usize, units: Units) -> Result<Row> {
    let lambda = closed_eigenvalue(params.gamma(), n)?;
    Ok(exact_row(params, Label::Closed(n), lambda, units))
}

pub fn numeric_row(
    params: &ModelParams,
    n: usize,
    options: &SolverOptions,
    units: Units,
) -> Result<Row> {
    let lb = lower_bound(params, n, options)?;
    let residual = lb.extended.map_or(lb.residual, |e| e.residual);
    Ok(Row {
        gamma: params.gamma(),
        label: Label::Numeric(n),
        tc_over_g: units.scale(lb.tc / params.g()),
        lambda_max: lb.lambda_max,
        residual,
        iterations: lb.iterations,
    })
}

/// The upper row reports `T_c*/g` and the eigenvalue bound it is built from.
pub fn upper_row(params: &ModelParams, units: Units) -> Result<Row> {
    let lambda = eigenvalue_upper(params.gamma())?;
    Ok(Row {
        gamma: params.gamma(),
        label: Label::Upper,
        tc_over_g: units.scale(tc_upper(params)? / params.g()),
        lambda_max: lambda,
        residual: 0.0,
        iterations: 0,
    })
}

/// All rows for one `γ`, in label order.
pub fn rows_for_gamma(
    params: &ModelParams,
    n_list: &[usize],
    options: &SolverOptions,
    units: Units,
) -> Result<Vec<Row>> {
    let mut rows = Vec::with_capacity(n_list.len() + 1);
    for &n in n_list {
        rows.push(match Label::for_truncation(n) {
            Label::Closed(_) => closed_row(params, n, units)?,
            _ => numeric_row(params, n, options, units)?,
        });
    }
    rows.push(upper_row(params, units)?);
    rows.sort_by_key(|r| r.label);
    Ok(rows)
}

/// Rows of every `γ` that succeeded, plus the first failure if any.
#[derive(Debug)]
pub struct SweepOutcome {
    pub rows: Vec<Row>,
    pub failure: Option<(f64, CliError)>,
}

/// Runs the sweep in parallel over `γ`; output order does not depend on scheduling.
pub fn run_sweep(config: &SweepConfig) -> SweepOutcome {
    let options = config.solver_options();
    let results: Vec<(f64, Result<Vec<Row>>)> = config
        .gamma_grid
        .par_iter()
        .map(|&gamma| {
            let rows = config
                .params(gamma)
                .and_then(|p| rows_for_gamma(&p, &config.n_list, &options, config.units));
            (gamma, rows)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failure = None;
    for (gamma, result) in results {
        match result {
            Ok(r) => rows.extend(r),
            Err(e) => {
                log::error!("gamma = {gamma}: {e}");
                failure.get_or_insert((gamma, e));
            }
        }
    }
    SweepOutcome { rows, failure }
}
