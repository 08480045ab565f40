use proptest::prelude::*;

use tc_gamma::closed_form::tc_lower_closed;
use tc_gamma::linalg::{dot, jacobi_eigen, normalize};
use tc_gamma::spectral::{
    convergence_sweep, eig_max_dense, lower_bound, tc_lower_numeric, SolverOptions,
};
use tc_gamma::upper::{hs_norm_diagnostics, tc_upper};
use tc_gamma::{assemble, ModelParams, Precision};

fn params(gamma: f64) -> ModelParams {
    ModelParams::with_gamma(gamma).unwrap()
}

#[test]
fn converged_value_at_two() {
    let t = tc_lower_numeric(&params(2.0), 400, 1e-13).unwrap();
    assert!((t - 0.182_726_247_7).abs() < 1e-9);
    let lambda = (2.0 * std::f64::consts::PI * t).powi(2);
    let op = assemble(&params(2.0), 400).unwrap();
    let r = eig_max_dense(&op, 1e-13).unwrap();
    assert!((r.lambda_max - lambda).abs() < 1e-12);
    assert!(r.residual <= 1e-13 * r.lambda_max);
}

#[test]
fn large_gamma_converges_fast() {
    let p = params(3.0);
    let diff = tc_lower_numeric(&p, 400, 1e-13).unwrap() - tc_lower_closed(&p, 4).unwrap();
    assert!((0.0..=1e-4).contains(&diff), "{diff}");
}

#[test]
fn sweep_digits_stabilize() {
    let rec = convergence_sweep(&params(2.0), &[100, 200, 400], &SolverOptions::default()).unwrap();
    assert!(rec.converged_digits >= 10, "{}", rec.converged_digits);

    let slow = convergence_sweep(&params(0.4), &[50, 100, 200, 400], &SolverOptions::default())
        .unwrap();
    assert!(slow.entries.windows(2).all(|w| w[0].tc < w[1].tc));
    assert!(slow.converged_digits < rec.converged_digits);
}

#[test]
fn residual_reverified_independently() {
    for &(g, n) in &[(0.4, 100), (1.0, 64), (3.1, 128)] {
        let op = assemble(&params(g), n).unwrap();
        let r = eig_max_dense(&op, 1e-13).unwrap();
        let m = op.matrix();
        let mut s = 0.0;
        for i in 0..n {
            let row: f64 = (0..n).map(|j| m[(i, j)] * r.eigenvector[j]).sum();
            let d = row - r.lambda_max * r.eigenvector[i];
            s += d * d;
        }
        assert!(s.sqrt() <= 1e-13 * r.lambda_max.max(1.0));
        assert!(r.lambda_max >= 1.0);
    }
}

#[test]
fn spectrum_gap_is_wide() {
    let op = assemble(&params(2.0), 200).unwrap();
    let r = eig_max_dense(&op, 1e-13).unwrap();
    assert!(!r.near_degenerate);
    let second = r.second_eigenvalue.unwrap();
    assert!(r.lambda_max - second > 0.5);
}

#[test]
fn extended_precision_at_small_gamma() {
    let p = params(0.4);
    let opts = SolverOptions {
        precision: Precision::Extended,
        ..SolverOptions::default()
    };
    let ext = lower_bound(&p, 200, &opts).unwrap();
    let dbl = lower_bound(&p, 200, &SolverOptions::default()).unwrap();
    let e = ext.extended.unwrap();
    assert!(e.residual < 1e-26);
    // 𝔤^{1/γ} amplifies relative eigenvalue error by 1/γ = 2.5.
    assert!(((e.tc.to_f64() - dbl.tc) / dbl.tc).abs() < 5e-13);
}

#[test]
fn frobenius_sums_settle() {
    // The 𝔊₁ and 𝔊₂ sums have tails of order 1/N, the 𝔊₃ sum of order N^{−2γ}.
    let rel = |a: f64, b: f64| (b - a) / b;
    for &g in &[1.0, 2.0, 3.0] {
        let d150 = hs_norm_diagnostics(g, 150).unwrap();
        let d200 = hs_norm_diagnostics(g, 200).unwrap();
        let d300 = hs_norm_diagnostics(g, 300).unwrap();
        let d400 = hs_norm_diagnostics(g, 400).unwrap();
        for (early, late) in [
            (rel(d150.f1, d200.f1), rel(d300.f1, d400.f1)),
            (rel(d150.f2, d200.f2), rel(d300.f2, d400.f2)),
        ] {
            assert!(late > 0.0 && late < 0.75 * early, "gamma={g}: {early} {late}");
        }
        let f3_step = rel(d300.f3, d400.f3);
        assert!(f3_step < if g >= 1.5 { 1e-6 } else { 1e-5 }, "gamma={g}: {f3_step}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rayleigh_quotient_bounded(
        gamma in 0.3f64..4.0,
        raw in prop::collection::vec(-1.0f64..1.0, 1..40),
    ) {
        let n = raw.len();
        let op = assemble(&params(gamma), n).unwrap();
        let r = eig_max_dense(&op, 1e-13).unwrap();
        let mut x = raw;
        if x.iter().all(|&v| v == 0.0) {
            x[0] = 1.0;
        }
        normalize(&mut x);
        let q = dot(&x, &op.matrix().matvec(&x));
        prop_assert!(q <= r.lambda_max + 1e-13);
    }

    #[test]
    fn monotone_in_dimension(gamma in 0.3f64..4.0, n in 1usize..60) {
        let op = assemble(&params(gamma), n + 1).unwrap();
        let big = eig_max_dense(&op, 1e-13).unwrap().lambda_max;
        let small = eig_max_dense(&op.block(n).unwrap(), 1e-13).unwrap().lambda_max;
        prop_assert!(small <= big + 1e-13);
        prop_assert!(small >= 1.0 - 1e-13);
    }

    #[test]
    fn sandwich(gamma in 0.3f64..5.0, n in 1usize..80) {
        let p = params(gamma);
        let lo = tc_lower_numeric(&p, n, 1e-13).unwrap();
        prop_assert!(lo <= tc_upper(&p).unwrap());
    }

    #[test]
    fn jacobi_spectrum_is_complete(gamma in 0.3f64..4.0, n in 1usize..30) {
        let op = assemble(&params(gamma), n).unwrap();
        let eig = jacobi_eigen(op.matrix(), 100).unwrap();
        let tr: f64 = eig.values.iter().sum();
        prop_assert!((tr - op.matrix().trace()).abs() < 1e-12);
    }
}
