//! Command-line front end: single-point bounds, `γ` sweeps with CSV/JSON output and
//! the built-in verification checks.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod rows;
pub mod verify;

use std::io::Write;

use tc_gamma::closed_form::tc_lower_closed;
use tc_gamma::spectral::SolverOptions;
use tc_gamma::upper::{eigenvalue_upper, epsilon_of_gamma, tc_upper};
use tc_gamma::ModelParams;

use crate::cli::{BoundsArgs, Command, PointArgs, SweepArgs};
use crate::config::{check_tol, gamma_grid, OutputTarget, SweepConfig, Units};
use crate::error::{CliError, Result};
use crate::output::{check_sandwich, truncate_digits, write_record, RunRecord};
use crate::rows::{rows_for_gamma, run_sweep, Row, SweepOutcome};

/// Digits shown after the decimal point in tables; never rounded.
pub const DISPLAY_DIGITS: usize = 10;

/// Environment variable that fixes the number of worker threads.
pub const THREADS_VAR: &str = "TC_GAMMA_THREADS";

pub fn run(command: Command, out: &mut impl Write) -> Result<()> {
    match command {
        Command::Bounds(args) => bounds(&args, out),
        Command::Sweep(args) => sweep(&args, out),
        Command::Upper(args) => upper(&args, out),
        Command::ClosedForm(args) => closed_form(&args, out),
        Command::Verify { level } => report_checks(&verify::run(level), out),
    }
}

/// Prints one line per check; fails if any check failed.
pub fn report_checks(checks: &[verify::Check], out: &mut impl Write) -> Result<()> {
    for c in checks {
        writeln!(out, "{c}").map_err(stdout_error)?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::VerifyFailed {
            failed,
            total: checks.len(),
        })
    }
}

fn point_params(args: &PointArgs) -> Result<ModelParams> {
    Ok(ModelParams::new(args.gamma, args.g)?)
}

fn bounds(args: &BoundsArgs, out: &mut impl Write) -> Result<()> {
    let params = point_params(&args.point)?;
    check_tol(args.solver.tol)?;
    if args.n == 0 {
        return Err(CliError::InvalidArgument("n must be at least 1".into()));
    }
    let mut n_list = vec![1, 2, 3, 4];
    if args.n > 4 {
        n_list.push(args.n);
    }
    let options = SolverOptions {
        precision: args.solver.precision.into(),
        ..SolverOptions::with_tol(args.solver.tol)
    };
    let rows = rows_for_gamma(&params, &n_list, &options, Units::G)?;
    check_sandwich(&rows)?;
    write_table(&params, &rows, out).map_err(stdout_error)
}

fn write_table(params: &ModelParams, rows: &[Row], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "gamma = {}, g = {}", params.gamma(), params.g())?;
    writeln!(
        out,
        "{:<12} {:>16} {:>22} {:>10} {:>10}",
        "label", "tc", "lambda_max", "residual", "iterations"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<12} {:>16} {:>22} {:>10.1e} {:>10}",
            r.label.to_string(),
            truncate_digits(r.tc_over_g * params.g(), DISPLAY_DIGITS),
            truncate_digits(r.lambda_max, 15),
            r.residual,
            r.iterations
        )?;
    }
    Ok(())
}

fn upper(args: &PointArgs, out: &mut impl Write) -> Result<()> {
    let params = point_params(args)?;
    let tc = tc_upper(&params)?;
    let lambda = eigenvalue_upper(params.gamma())?;
    let eps = epsilon_of_gamma(params.gamma());
    writeln!(
        out,
        "gamma = {}, g = {}\nepsilon    {}\nlambda_max <= {}\ntc         <= {}",
        params.gamma(),
        params.g(),
        eps,
        truncate_digits(lambda, 15),
        truncate_digits(tc, DISPLAY_DIGITS)
    )
    .map_err(stdout_error)
}

fn closed_form(args: &PointArgs, out: &mut impl Write) -> Result<()> {
    let params = point_params(args)?;
    writeln!(out, "gamma = {}, g = {}", params.gamma(), params.g()).map_err(stdout_error)?;
    for n in 1..=rows::MAX_CLOSED {
        let tc = tc_lower_closed(&params, n)?;
        writeln!(out, "closed{n}  {}", truncate_digits(tc, DISPLAY_DIGITS))
            .map_err(stdout_error)?;
    }
    Ok(())
}

pub fn sweep_config(args: &SweepArgs) -> Result<SweepConfig> {
    SweepConfig {
        gamma_grid: gamma_grid(args.gamma_min, args.gamma_max, args.gamma_step, &args.gamma_extra)?,
        n_list: args.n_list.clone(),
        g: args.g,
        tol: args.solver.tol,
        precision_mode: args.solver.precision,
        units: args.output.units,
        output: OutputTarget {
            path: args.output.out.clone(),
            format: args.output.format,
        },
    }
    .validate()
}

fn sweep(args: &SweepArgs, out: &mut impl Write) -> Result<()> {
    let config = sweep_config(args)?;
    let outcome = run_sweep(&config);
    finish_sweep(config, outcome, out)
}

/// Writes whatever rows were computed, then reports the first solver failure.
pub fn finish_sweep(config: SweepConfig, outcome: SweepOutcome, out: &mut impl Write) -> Result<()> {
    write_record(&RunRecord::new(config, outcome.rows), out)?;
    match outcome.failure {
        Some((_, e)) => Err(e),
        None => Ok(()),
    }
}

fn stdout_error(source: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}
