use std::fmt;

use rayon::prelude::*;
use tc_gamma::closed_form::tc_lower_closed;
use tc_gamma::forms::{
    el_residual, k2_expanded, k2_simplified, k_gamma, q_form, theta_to_xi, AngleSequence,
};
use tc_gamma::kernel::operator_parts;
use tc_gamma::linalg::jacobi_eigen;
use tc_gamma::spectral::{
    eig_max_dense, fixed_point_operator, positivity_certificate, spectral_radius,
    tc_lower_numeric,
};
use tc_gamma::upper::{hs_norm_diagnostics, tc_upper, zeta};
use tc_gamma::{assemble, ModelParams};

use crate::config::gamma_grid;
use crate::output::truncate_digits;
use crate::rows::closed_eigenvalue;

const TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    /// Golden values and identities.
    Fast,
    /// Adds the N = 400 reproductions.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn params(gamma: f64) -> ModelParams {
    ModelParams::with_gamma(gamma).expect("grid gammas are positive")
}

fn default_grid() -> Vec<f64> {
    gamma_grid(0.4, 3.1, 0.1, &[]).expect("default grid is valid")
}

/// Runs the checks for `level`; errors inside a check count as failures.
pub fn run(level: Level) -> Vec<Check> {
    let mut checks = vec![
        golden_closed_forms(),
        golden_upper(),
        zeta_values(),
        closed_matches_jacobi(),
        lower_chain(&[1, 2, 3, 4, 8, 16, 64]),
        positivity(&[4, 16, 64]),
        quadratic_identities(),
        taylor_remainder(),
        fixed_point(&[4, 50]),
        frobenius_bound(),
    ];
    if level == Level::Full {
        checks.extend([
            converged_at_two(),
            lower_chain(&[1, 2, 3, 4, 8, 16, 64, 200, 400]),
            fixed_point(&[400]),
            large_and_small_gamma(),
        ]);
    }
    checks
}

fn golden_closed_forms() -> Check {
    let p = params(2.0);
    let expected = [
        (1, 0.159_154_943_0, 1e-10),
        (2, 0.179_616_094_4, 1e-9),
        (3, 0.182_038_3, 1e-6),
        (4, 0.182_513_710_2, 1e-9),
    ];
    let mut worst = String::new();
    let mut passed = true;
    for (n, want, tol) in expected {
        match tc_lower_closed(&p, n) {
            Ok(got) if (got - want).abs() <= tol => {}
            Ok(got) => {
                passed = false;
                worst = format!("N = {n}: {got} vs {want}");
            }
            Err(e) => {
                passed = false;
                worst = format!("N = {n}: {e}");
            }
        }
    }
    let detail = if passed {
        "closed-form T_c^(1..4) at gamma = 2".to_string()
    } else {
        worst
    };
    check("golden-closed-forms", passed, detail)
}

fn golden_upper() -> Check {
    let p = params(2.0);
    match (tc_upper(&p), tc_lower_closed(&p, 4)) {
        (Ok(up), Ok(t4)) => {
            let ratio = up / t4;
            check(
                "golden-upper-bound",
                (up - 0.370_863_7).abs() <= 1e-6 && (ratio - 2.032).abs() <= 1e-3,
                format!("T* = {up:.10}, T*/T_c^(4) = {ratio:.5}"),
            )
        }
        (Err(e), _) | (_, Err(e)) => check("golden-upper-bound", false, e.to_string()),
    }
}

fn zeta_values() -> Check {
    let pi = std::f64::consts::PI;
    let cases = [(2.0, pi.powi(2) / 6.0), (4.0, pi.powi(4) / 90.0), (6.0, pi.powi(6) / 945.0)];
    let worst = cases
        .iter()
        .map(|&(s, want)| zeta(s).map_or(f64::INFINITY, |z| (z - want).abs()))
        .fold(0.0, f64::max);
    check("zeta-even-values", worst <= 1e-12, format!("max error {worst:e}"))
}

fn closed_matches_jacobi() -> Check {
    let worst = default_grid()
        .par_iter()
        .map(|&g| {
            (2..=4)
                .map(|n| {
                    let closed = closed_eigenvalue(g, n);
                    let dense = assemble(&params(g), n).and_then(|op| jacobi_eigen(op.matrix(), 100));
                    match (closed, dense) {
                        (Ok(c), Ok(d)) => (c - d.values[n - 1]).abs(),
                        _ => f64::INFINITY,
                    }
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    check(
        "closed-form-vs-jacobi",
        worst <= 1e-12,
        format!("max |difference| over N = 2..4 and the gamma grid: {worst:e}"),
    )
}

fn chain_for_gamma(g: f64, ns: &[usize]) -> std::result::Result<(), String> {
    let p = params(g);
    let upper = tc_upper(&p).map_err(|e| e.to_string())?;
    let mut previous = f64::NEG_INFINITY;
    for &n in ns {
        let tc = if n <= 4 {
            tc_lower_closed(&p, n)
        } else {
            tc_lower_numeric(&p, n, TOL)
        }
        .map_err(|e| format!("gamma = {g}, N = {n}: {e}"))?;
        if tc.is_nan() || tc <= previous {
            return Err(format!("gamma = {g}: T_c^({n}) = {tc} not above {previous}"));
        }
        if tc > upper {
            return Err(format!("gamma = {g}: T_c^({n}) = {tc} above T* = {upper}"));
        }
        previous = tc;
    }
    Ok(())
}

fn lower_chain(ns: &[usize]) -> Check {
    let failures: Vec<String> = default_grid()
        .par_iter()
        .filter_map(|&g| chain_for_gamma(g, ns).err())
        .collect();
    let largest = ns.last().copied().unwrap_or(0);
    match failures.first() {
        None => check(
            "monotone-sandwich",
            true,
            format!("T_c^(N) increasing up to N = {largest} and below T* on the gamma grid"),
        ),
        Some(f) => check("monotone-sandwich", false, f.clone()),
    }
}

fn positivity(ns: &[usize]) -> Check {
    let mut smallest = f64::INFINITY;
    let mut passed = true;
    for g in default_grid() {
        for &n in ns {
            match assemble(&params(g), n).and_then(|op| eig_max_dense(&op, TOL)) {
                Ok(mut r) => {
                    passed &= positivity_certificate(&mut r);
                    smallest = smallest.min(r.min_component.unwrap_or(f64::NAN));
                }
                Err(_) => passed = false,
            }
        }
    }
    check(
        "perron-positivity",
        passed,
        format!("smallest eigenvector component {smallest:e}"),
    )
}

fn fixed_point(ns: &[usize]) -> Check {
    let mut worst = 0.0f64;
    for g in [0.5, 1.0, 2.0] {
        for &n in ns {
            let dev = assemble(&params(g), n)
                .and_then(|op| eig_max_dense(&op, TOL))
                .and_then(|r| fixed_point_operator(&operator_parts(g, n), r.lambda_max))
                .and_then(|m| spectral_radius(&m, TOL))
                .map_or(f64::INFINITY, |rho| (rho - 1.0).abs());
            worst = worst.max(dev);
        }
    }
    check(
        "fixed-point-radius",
        worst <= 1e-8,
        format!("max |rho - 1| for N in {ns:?}: {worst:e}"),
    )
}

/// Deterministic angle samples in `[0, π/2]`.
fn sample_angles(seed: usize, len: usize) -> Vec<f64> {
    (0..len)
        .map(|k| {
            let x = ((seed * 31 + k * 17 + 7) as f64 * 0.618_033_988_749_895).fract();
            x * std::f64::consts::FRAC_PI_2
        })
        .collect()
}

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn quadratic_identities() -> Check {
    let mut worst = 0.0f64;
    for seed in 0..200 {
        let len = 1 + seed % 8;
        let Ok(t) = AngleSequence::new(sample_angles(seed, len)) else {
            return check("quadratic-identities", false, "invalid sample".into());
        };
        let gamma = 0.4 + 2.6 * ((seed as f64) * 0.754_877_666).fract();
        let b = 0.1 + 2.9 * ((seed as f64) * 0.569_840_29).fract();
        let e = k2_expanded(b, gamma, &t);
        let s = k2_simplified(b, gamma, &t);
        let q = q_form(b, gamma, &theta_to_xi(&t)).map_or(f64::NAN, |q| 0.5 * q);
        worst = worst.max(rel_err(e, s)).max(rel_err(s, q));
        if q.is_nan() {
            worst = f64::INFINITY;
        }
    }
    let zero = el_residual(1.7, 1.3, &AngleSequence::zeros(8));
    let zero_ok = zero.iter().all(|&r| r == 0.0);
    check(
        "quadratic-identities",
        worst <= 1e-12 && zero_ok,
        format!("max relative mismatch {worst:e}; EL residual at zero vanishes: {zero_ok}"),
    )
}

fn taylor_remainder() -> Check {
    let Ok(base) = AngleSequence::new(vec![0.8, 0.5, 0.3, 0.6, 0.1]) else {
        return check("taylor-remainder", false, "invalid sample".into());
    };
    let (b, gamma) = (0.9, 1.6);
    let pts: Vec<(f64, f64)> = [1e-1, 1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&e| {
            let t = base.scaled(e);
            let r = (k_gamma(b, gamma, &t) - k2_simplified(b, gamma, &t)).abs();
            (e.ln(), r.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    check(
        "taylor-remainder",
        (slope - 4.0).abs() <= 0.1,
        format!("log-log slope {slope:.4}"),
    )
}

fn frobenius_bound() -> Check {
    let mut passed = true;
    for g in [0.5, 1.0, 2.0] {
        passed &= hs_norm_diagnostics(g, 200).is_ok_and(|d| d.within_bound());
    }
    check(
        "frobenius-bound",
        passed,
        "G3 Frobenius sums below zeta(1+gamma)^2 at N = 200".into(),
    )
}

fn converged_at_two() -> Check {
    match tc_lower_numeric(&params(2.0), 400, TOL) {
        Ok(t) => {
            let shown = truncate_digits(t, 10);
            check("converged-gamma-2", shown == "0.1827262477", format!("T_c^(400) = {shown}"))
        }
        Err(e) => check("converged-gamma-2", false, e.to_string()),
    }
}

fn large_and_small_gamma() -> Check {
    let gap = |g: f64| -> std::result::Result<(f64, f64), String> {
        let p = params(g);
        let num = tc_lower_numeric(&p, 400, TOL).map_err(|e| e.to_string())?;
        let four = tc_lower_closed(&p, 4).map_err(|e| e.to_string())?;
        Ok((num - four, num))
    };
    match (gap(3.0), gap(0.4)) {
        (Ok((d3, _)), Ok((d04, t04))) => check(
            "truncation-gap",
            (0.0..=1e-4).contains(&d3) && d04 > 1e-3 * t04,
            format!("gamma = 3: {d3:e}; gamma = 0.4: {d04:e} (T_c {t04:.6})"),
        ),
        (Err(e), _) | (_, Err(e)) => check("truncation-gap", false, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_level_passes() {
        let checks = run(Level::Fast);
        for c in &checks {
            assert!(c.passed, "{c}");
        }
        assert!(checks.iter().any(|c| c.name == "golden-closed-forms"));
    }

    #[test]
    fn samples_are_in_range() {
        let s = sample_angles(3, 8);
        assert!(s.iter().all(|&x| (0.0..=std::f64::consts::FRAC_PI_2).contains(&x)));
    }
}
