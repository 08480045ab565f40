//! Largest eigenpairs of `𝔊^(N)`, the positivity certificate, the fixed-point operator
//! `ℭ(κ) = (𝔊₁ + κ)^{−1}(𝔊₂ + 𝔊₃)` and convergence sweeps in `N`.

use log::{debug, warn};

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::kernel::{assemble, operator_parts, ModelParams, OperatorParts, TruncatedOperator};
use crate::linalg::{self, jacobi_eigen, perron_root, shifted_power, DenseMatrix};
use crate::{Precision, INV_TWO_PI};

pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;
/// Largest dimension solved by Jacobi rotations; larger problems use shifted power iteration.
pub const JACOBI_MAX_DIM: usize = 512;
/// Two top eigenvalues closer than this trigger a near-degeneracy warning.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Residual target of the double-double refinement.
const EXTENDED_TOL: f64 = 1e-28;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    /// Cyclic Jacobi, optionally polished by a few power steps.
    Jacobi,
    /// Power iteration on `𝔊 + sI`.
    PowerDeflated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative residual tolerance, in `[1e-15, 1e-6]`.
    pub tol: f64,
    /// Cap on Jacobi sweeps and on power steps.
    pub max_iterations: usize,
    pub jacobi_max_dim: usize,
    pub precision: Precision,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            jacobi_max_dim: JACOBI_MAX_DIM,
            precision: Precision::Double,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(1e-15..=1e-6).contains(&self.tol) {
            return Err(Error::InvalidParameter(format!(
                "tolerance {} outside [1e-15, 1e-6]",
                self.tol
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("iteration cap must be positive".into()));
        }
        Ok(())
    }
}

/// Largest eigenpair of a truncated operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub lambda_max: f64,
    /// Unit eigenvector, signed so that its largest-magnitude component is positive.
    pub eigenvector: Vec<f64>,
    /// `‖𝔊v − λv‖₂`, recomputed from the matrix after the solve.
    pub residual: f64,
    pub iterations: usize,
    pub method: SolverMethod,
    /// Second-largest eigenvalue, when the solver produced the full spectrum.
    pub second_eigenvalue: Option<f64>,
    pub near_degenerate: bool,
    /// Smallest eigenvector component, set by [`positivity_certificate`].
    pub min_component: Option<f64>,
}

fn canonical_sign(v: &mut [f64]) {
    let lead = v
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(0.0);
    if lead < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn power_shift(a: &DenseMatrix<f64>) -> f64 {
    1.0 + (0..a.dim()).map(|i| a[(i, i)].abs()).fold(0.0, f64::max)
}

/// Largest eigenvalue and unit eigenvector with default options.
pub fn eig_max_dense(op: &TruncatedOperator, tol: f64) -> Result<SpectralResult> {
    eig_max_dense_with(op, &SolverOptions::with_tol(tol), None)
}

/// Largest eigenpair. `warm` is an approximate eigenvector of length `N` used to seed the
/// power iteration; Jacobi ignores it.
pub fn eig_max_dense_with(
    op: &TruncatedOperator,
    options: &SolverOptions,
    warm: Option<&[f64]>,
) -> Result<SpectralResult> {
    options.validate()?;
    let a = op.matrix();
    let n = a.dim();
    let target = |lambda: f64| options.tol * lambda.abs().max(1.0);

    let mut result = if n <= options.jacobi_max_dim {
        let eig = jacobi_eigen(a, options.max_iterations)?;
        let lambda = eig.values[n - 1];
        let mut v = eig.vectors[n - 1].clone();
        let second = (n > 1).then(|| eig.values[n - 2]);
        let mut iterations = eig.sweeps;
        let mut residual = linalg::eigen_residual(a, lambda, &v);
        let mut lambda = lambda;
        if residual > target(lambda) {
            debug!("polishing Jacobi eigenpair at N = {n}, residual {residual:e}");
            let out = shifted_power(a, power_shift(a), v, options.tol, options.max_iterations)?;
            lambda = out.lambda;
            v = out.vector;
            residual = out.residual;
            iterations += out.iterations;
        }
        let near_degenerate = second.is_some_and(|s| lambda - s < DEGENERACY_GAP);
        SpectralResult {
            lambda_max: lambda,
            eigenvector: v,
            residual,
            iterations,
            method: SolverMethod::Jacobi,
            second_eigenvalue: second,
            near_degenerate,
            min_component: None,
        }
    } else {
        let start = match warm {
            Some(w) if w.len() == n && w.iter().any(|&x| x != 0.0) => w.to_vec(),
            _ => vec![1.0; n],
        };
        let out = shifted_power(a, power_shift(a), start, options.tol, options.max_iterations)?;
        SpectralResult {
            lambda_max: out.lambda,
            eigenvector: out.vector,
            residual: out.residual,
            iterations: out.iterations,
            method: SolverMethod::PowerDeflated,
            second_eigenvalue: None,
            near_degenerate: false,
            min_component: None,
        }
    };

    if result.near_degenerate {
        warn!(
            "near-degenerate top eigenvalues at N = {n}, gamma = {}: gap below {DEGENERACY_GAP:e}",
            op.gamma()
        );
    }
    canonical_sign(&mut result.eigenvector);
    result.residual = linalg::eigen_residual(a, result.lambda_max, &result.eigenvector);
    if result.residual.is_nan() || result.residual > target(result.lambda_max) {
        return Err(Error::NoConvergence {
            iterations: result.iterations,
            residual: result.residual,
        });
    }
    Ok(result)
}

/// Perron–Frobenius check: orients the eigenvector so that its largest-magnitude
/// component is positive, records the smallest component and reports whether all
/// components are strictly positive.
pub fn positivity_certificate(result: &mut SpectralResult) -> bool {
    canonical_sign(&mut result.eigenvector);
    let min = result
        .eigenvector
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    result.min_component = Some(min);
    min > 0.0
}

/// `ℭ(κ) = diag(1/(κ + 𝔊₁(n,n)))·(𝔊₂ + 𝔊₃)`.
pub fn fixed_point_operator(parts: &OperatorParts, kappa: f64) -> Result<DenseMatrix> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "kappa must be positive (got {kappa})"
        )));
    }
    let pos = parts.positive_part();
    Ok(DenseMatrix::from_fn(parts.dim(), |i, j| {
        pos[(i, j)] / (kappa + parts.g1_diag[i])
    }))
}

/// Spectral radius of an entrywise nonnegative matrix by power iteration from the
/// all-ones vector.
pub fn spectral_radius(matrix: &DenseMatrix, tol: f64) -> Result<f64> {
    Ok(perron_root(matrix, tol, DEFAULT_MAX_ITERATIONS)?.radius)
}

/// Spectral radius of a symmetric matrix with entries of either sign, `max |λ_i|`.
pub fn spectral_radius_symmetric(matrix: &DenseMatrix) -> Result<f64> {
    let eig = jacobi_eigen(matrix, DEFAULT_MAX_ITERATIONS)?;
    Ok(eig.values[0].abs().max(eig.values[eig.values.len() - 1].abs()))
}

/// `(g/2π)·exp(ln λ / γ)`.
pub fn tc_from_eigenvalue(params: &ModelParams, lambda: f64) -> f64 {
    params.g() * INV_TWO_PI * (lambda.ln() / params.gamma()).exp()
}

/// A numeric lower bound `T_c^(N)` with its solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub n: usize,
    pub tc: f64,
    pub lambda_max: f64,
    pub residual: f64,
    pub iterations: usize,
    pub method: SolverMethod,
    /// Double-double values, present in extended precision.
    pub extended: Option<ExtendedValues>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedValues {
    pub tc: DoubleDouble,
    pub lambda_max: DoubleDouble,
    pub residual: f64,
}

/// `T_c^(N)(g, γ)` in binary64.
pub fn tc_lower_numeric(params: &ModelParams, n: usize, tol: f64) -> Result<f64> {
    Ok(lower_bound(params, n, &SolverOptions::with_tol(tol))?.tc)
}

/// `T_c^(N)(g, γ)` together with the eigen-solve diagnostics.
pub fn lower_bound(params: &ModelParams, n: usize, options: &SolverOptions) -> Result<LowerBound> {
    let op = assemble(params, n)?;
    let spec = eig_max_dense_with(&op, options, None)?;
    finish_bound(params, spec, options)
}

fn finish_bound(
    params: &ModelParams,
    spec: SpectralResult,
    options: &SolverOptions,
) -> Result<LowerBound> {
    let n = spec.eigenvector.len();
    let extended = match options.precision {
        Precision::Double => None,
        Precision::Extended => Some(refine_extended(params, &spec, options.max_iterations)?),
    };
    let tc = match &extended {
        Some(e) => e.tc.to_f64(),
        None => tc_from_eigenvalue(params, spec.lambda_max),
    };
    Ok(LowerBound {
        n,
        tc,
        lambda_max: extended.map_or(spec.lambda_max, |e| e.lambda_max.to_f64()),
        residual: spec.residual,
        iterations: spec.iterations,
        method: spec.method,
        extended,
    })
}

/// Re-runs the power iteration in double-double arithmetic from the binary64 eigenvector.
fn refine_extended(
    params: &ModelParams,
    spec: &SpectralResult,
    max_iterations: usize,
) -> Result<ExtendedValues> {
    let n = spec.eigenvector.len();
    let gamma = DoubleDouble::from_f64(params.gamma());
    let a = operator_parts(gamma, n).combined();
    let shift = DoubleDouble::from_f64(power_shift(&a.map(|x| x.to_f64())));
    let start = spec.eigenvector.iter().map(|&x| DoubleDouble::from_f64(x)).collect();
    let out = shifted_power(&a, shift, start, EXTENDED_TOL, max_iterations)?;
    let two_pi = DoubleDouble::PI * DoubleDouble::from_f64(2.0);
    let tc = DoubleDouble::from_f64(params.g()) / two_pi * (out.lambda.ln() / gamma).exp();
    Ok(ExtendedValues {
        tc,
        lambda_max: out.lambda,
        residual: out.residual.to_f64(),
    })
}

/// `T_c^(N)` along an increasing list of truncations.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub gamma: f64,
    pub entries: Vec<ConvergenceEntry>,
    /// Decimal places on which the last two `tc` values agree.
    pub converged_digits: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceEntry {
    pub n: usize,
    pub tc: f64,
    pub lambda_max: f64,
    pub bound: LowerBound,
}

/// Number of decimal places `d ≤ 15` such that `⌊a·10^d⌋ = ⌊b·10^d⌋`.
pub fn shared_digits(a: f64, b: f64) -> u32 {
    let mut d = 0;
    while d < 15 {
        let s = 10f64.powi(d as i32 + 1);
        if (a * s).floor() != (b * s).floor() {
            break;
        }
        d += 1;
    }
    d
}

/// Computes `T_c^(N)` for each `N` in `n_list` (strictly increasing), reusing one assembly
/// at the largest `N` and seeding each solve with the previous eigenvector padded by zeros.
pub fn convergence_sweep(
    params: &ModelParams,
    n_list: &[usize],
    options: &SolverOptions,
) -> Result<ConvergenceRecord> {
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "n_list must be nonempty, positive and strictly increasing".into(),
        ));
    }
    let full = assemble(params, *n_list.last().unwrap())?;
    let mut entries: Vec<ConvergenceEntry> = Vec::with_capacity(n_list.len());
    let mut warm: Option<Vec<f64>> = None;
    for &n in n_list {
        let op = full.block(n)?;
        let seed = warm.take().map(|mut v| {
            v.resize(n, 0.0);
            linalg::normalize(&mut v);
            v
        });
        let spec = eig_max_dense_with(&op, options, seed.as_deref())?;
        warm = Some(spec.eigenvector.clone());
        let bound = finish_bound(params, spec, options)?;
        if let Some(prev) = entries.last() {
            let slack = 10.0 * f64::EPSILON * prev.tc.abs();
            if bound.tc < prev.tc - slack {
                return Err(Error::MonotonicityViolation {
                    previous_n: prev.n,
                    n,
                    previous: prev.tc,
                    current: bound.tc,
                });
            }
        }
        entries.push(ConvergenceEntry {
            n,
            tc: bound.tc,
            lambda_max: bound.lambda_max,
            bound,
        });
    }
    let converged_digits = match entries.as_slice() {
        [.., a, b] => shared_digits(a.tc, b.tc),
        _ => 0,
    };
    Ok(ConvergenceRecord {
        gamma: params.gamma(),
        entries,
        converged_digits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{eig_max_2, eig_max_4, tc_lower_closed};

    fn params(gamma: f64) -> ModelParams {
        ModelParams::with_gamma(gamma).unwrap()
    }

    fn op(gamma: f64, n: usize) -> TruncatedOperator {
        assemble(&params(gamma), n).unwrap()
    }

    #[test]
    fn one_by_one() {
        let r = eig_max_dense(&op(1.7, 1), 1e-13).unwrap();
        assert_eq!(r.lambda_max, 1.0);
        assert_eq!(r.eigenvector, vec![1.0]);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn two_by_two_matches_closed_form() {
        let r = eig_max_dense(&op(2.0, 2), 1e-13).unwrap();
        assert!((r.lambda_max - eig_max_2(2.0).unwrap()).abs() < 1e-12);
        assert_eq!(r.method, SolverMethod::Jacobi);
    }

    #[test]
    fn power_path_agrees_with_jacobi() {
        let a = op(1.1, 60);
        let jac = eig_max_dense(&a, 1e-13).unwrap();
        let opts = SolverOptions {
            jacobi_max_dim: 10,
            ..SolverOptions::default()
        };
        let pow = eig_max_dense_with(&a, &opts, None).unwrap();
        assert_eq!(pow.method, SolverMethod::PowerDeflated);
        assert!((pow.lambda_max - jac.lambda_max).abs() < 1e-12);
        for (x, y) in pow.eigenvector.iter().zip(&jac.eigenvector) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn tolerance_range_enforced() {
        assert!(eig_max_dense(&op(2.0, 3), 1e-5).is_err());
        assert!(eig_max_dense(&op(2.0, 3), 1e-16).is_err());
    }

    #[test]
    fn iteration_cap_reports_no_convergence() {
        let opts = SolverOptions {
            jacobi_max_dim: 0,
            max_iterations: 2,
            ..SolverOptions::default()
        };
        let err = eig_max_dense_with(&op(0.6, 30), &opts, None).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn certificate_cases() {
        let mut r = eig_max_dense(&op(2.0, 4), 1e-13).unwrap();
        assert!(positivity_certificate(&mut r));
        assert!(r.min_component.unwrap() > 0.0);

        let mut one = eig_max_dense(&op(2.0, 1), 1e-13).unwrap();
        assert!(positivity_certificate(&mut one));

        let mut bad = r.clone();
        bad.eigenvector[2] = -bad.eigenvector[2];
        assert!(!positivity_certificate(&mut bad));

        let mut flipped = r.clone();
        flipped.eigenvector.iter_mut().for_each(|x| *x = -*x);
        assert!(positivity_certificate(&mut flipped));
    }

    #[test]
    fn fixed_point_operator_radius() {
        let parts = operator_parts(1.3, 1);
        assert_eq!(fixed_point_operator(&parts, 1.0).unwrap().as_slice(), &[1.0]);
        assert!(fixed_point_operator(&parts, 0.0).is_err());

        let parts = operator_parts(2.0, 4);
        let g4 = eig_max_4(2.0).unwrap();
        let c = fixed_point_operator(&parts, g4).unwrap();
        assert!(c.as_slice().iter().all(|&x| x > 0.0));
        assert!((spectral_radius(&c, 1e-14).unwrap() - 1.0).abs() < 1e-8);
        let c2 = fixed_point_operator(&parts, 2.0 * g4).unwrap();
        assert!(spectral_radius(&c2, 1e-14).unwrap() < 1.0);
    }

    #[test]
    fn fixed_point_consistency() {
        for &(g, n) in &[(0.5, 30), (1.0, 60), (2.0, 40)] {
            let a = op(g, n);
            let r = eig_max_dense(&a, 1e-13).unwrap();
            let c = fixed_point_operator(&operator_parts(g, n), r.lambda_max).unwrap();
            let cv = c.matvec(&r.eigenvector);
            for (x, y) in cv.iter().zip(&r.eigenvector) {
                assert!(((x - y) / y).abs() < 1e-8, "γ={g} N={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn symmetric_radius_is_lambda_max() {
        for &g in &[0.5, 2.0] {
            let a = op(g, 20);
            let r = eig_max_dense(&a, 1e-13).unwrap();
            let rho = spectral_radius_symmetric(a.matrix()).unwrap();
            assert!((rho - r.lambda_max).abs() < 1e-12);
        }
    }

    #[test]
    fn numeric_bound_at_three() {
        let t = tc_lower_numeric(&params(2.0), 3, 1e-13).unwrap();
        assert!((t - 0.182_038_3).abs() < 1e-6);
    }

    #[test]
    fn sweep_matches_closed_forms() {
        let p = params(2.0);
        let rec = convergence_sweep(&p, &[1, 2, 3, 4], &SolverOptions::default()).unwrap();
        for e in &rec.entries {
            let closed = tc_lower_closed(&p, e.n).unwrap();
            assert!((e.tc - closed).abs() < 1e-9, "N={}", e.n);
        }
        assert!(rec.entries.windows(2).all(|w| w[0].tc < w[1].tc));
    }

    #[test]
    fn sweep_warm_start_on_power_path() {
        let opts = SolverOptions {
            jacobi_max_dim: 4,
            ..SolverOptions::default()
        };
        let p = params(0.9);
        let rec = convergence_sweep(&p, &[8, 16, 32], &opts).unwrap();
        let cold = lower_bound(&p, 32, &opts).unwrap();
        let warm = &rec.entries[2].bound;
        assert!((warm.tc - cold.tc).abs() < 1e-13);
        assert!(warm.iterations < cold.iterations);
    }

    #[test]
    fn sweep_rejects_bad_lists() {
        let p = params(2.0);
        let o = SolverOptions::default();
        assert!(convergence_sweep(&p, &[], &o).is_err());
        assert!(convergence_sweep(&p, &[3, 3], &o).is_err());
        assert!(convergence_sweep(&p, &[0, 3], &o).is_err());
    }

    #[test]
    fn digit_agreement() {
        assert_eq!(shared_digits(0.182_726_247_77, 0.182_726_247_79), 10);
        assert_eq!(shared_digits(0.18, 0.28), 0);
        assert_eq!(shared_digits(0.5, 0.5), 15);
    }

    #[test]
    fn extended_precision_agrees() {
        let p = params(0.7);
        let opts = SolverOptions {
            precision: Precision::Extended,
            ..SolverOptions::default()
        };
        let b = lower_bound(&p, 12, &opts).unwrap();
        let e = b.extended.unwrap();
        let d = lower_bound(&p, 12, &SolverOptions::default()).unwrap();
        assert!(e.residual < 1e-27);
        assert!((b.tc - d.tc).abs() < 1e-13 * d.tc);
        assert!((e.lambda_max.to_f64() - d.lambda_max).abs() < 1e-13);
    }

    #[test]
    fn threshold_restatement() {
        // (2πT/g)^γ > λ_max exactly when T lies above the lower bound.
        let p = ModelParams::new(1.5, 2.0).unwrap();
        let b = lower_bound(&p, 16, &SolverOptions::default()).unwrap();
        for &f in &[0.9, 0.999, 1.001, 1.1] {
            let t = f * b.tc;
            let lhs = (2.0 * std::f64::consts::PI * t / p.g()).powf(p.gamma());
            assert_eq!(lhs > b.lambda_max, t > b.tc);
        }
    }
}
