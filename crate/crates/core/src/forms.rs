//! Condensation-energy functional of the angle chain, its second-order expansion in two
//! equivalent forms, the `ℓ²` quadratic form and the Euler–Lagrange residual.
//!
//! Angle sequences have finite support `{0, …, N−1}` and vanish beyond it. Every sum over
//! `ℕ₀` then reduces exactly to sums over the support plus, for pairs with one index
//! outside, the one-dimensional tail
//! `T_n = Σ_{m≥N} [|n−m|^{−γ} − (n+m+1)^{−γ}] = Σ_{j=N−n}^{N+n} j^{−γ}`,
//! which telescopes to a finite sum.

use crate::error::{Error, Result};
use crate::kernel::{assemble, ModelParams};
use crate::linalg::dot;

/// Angles `θ_n`, radians, on a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSequence {
    theta: Vec<f64>,
}

impl AngleSequence {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidParameter("angle sequence needs a nonempty support".into()));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("angles must be finite".into()));
        }
        Ok(Self { theta })
    }

    pub fn zeros(support: usize) -> Self {
        Self {
            theta: vec![0.0; support.max(1)],
        }
    }

    pub fn support(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Multiplies every angle by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            theta: self.theta.iter().map(|t| s * t).collect(),
        }
    }

    /// `Σ (2n+1) θ_n²`.
    pub fn h_norm_sq(&self) -> f64 {
        self.theta
            .iter()
            .enumerate()
            .map(|(n, t)| (2 * n + 1) as f64 * t * t)
            .sum()
    }

    /// Whether all angles lie in `[0, π/2]`, the range a minimizer must occupy.
    pub fn is_minimizer_candidate(&self) -> bool {
        self.theta
            .iter()
            .all(|&t| (0.0..=std::f64::consts::FRAC_PI_2).contains(&t))
    }
}

/// `ξ_n = √(2n+1)·θ_n` on a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct XiSequence {
    xi: Vec<f64>,
}

impl XiSequence {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::InvalidParameter("sequence needs a nonempty support".into()));
        }
        if xi.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("entries must be finite".into()));
        }
        Ok(Self { xi })
    }

    pub fn support(&self) -> usize {
        self.xi.len()
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.xi, &self.xi)
    }
}

fn odd_sqrt(n: usize) -> f64 {
    ((2 * n + 1) as f64).sqrt()
}

pub fn theta_to_xi(theta: &AngleSequence) -> XiSequence {
    XiSequence {
        xi: theta
            .theta
            .iter()
            .enumerate()
            .map(|(n, t)| odd_sqrt(n) * t)
            .collect(),
    }
}

pub fn xi_to_theta(xi: &XiSequence) -> AngleSequence {
    AngleSequence {
        theta: xi
            .xi
            .iter()
            .enumerate()
            .map(|(n, x)| x / odd_sqrt(n))
            .collect(),
    }
}

/// `k^{−γ}` for `k = 0..=kmax`, entry 0 unused.
fn neg_powers(gamma: f64, kmax: usize) -> Vec<f64> {
    let mut p = vec![0.0; kmax + 1];
    for (k, slot) in p.iter_mut().enumerate().skip(1) {
        *slot = (k as f64).powf(-gamma);
    }
    p
}

/// Tails `T_n = Σ_{j=N−n}^{N+n} j^{−γ}` for `n < N`.
fn tails(inv: &[f64], support: usize) -> Vec<f64> {
    (0..support)
        .map(|n| (support - n..=support + n).rev().map(|j| inv[j]).sum())
        .collect()
}

/// `1 − cos x` without cancellation.
fn versine(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

/// `K_γ(Θ)`, exact for finite support.
pub fn k_gamma(beta_pow: f64, gamma: f64, theta: &AngleSequence) -> f64 {
    let th = theta.theta();
    let n_sup = th.len();
    let inv = neg_powers(gamma, 2 * n_sup);
    let tail = tails(&inv, n_sup);

    let mut single = 0.0;
    for (n, &t) in th.iter().enumerate() {
        let s = t.sin();
        // 1 − cos 2θ = 2 sin²θ
        single += (2 * n + 1) as f64 * versine(t) - beta_pow * s * s * inv[2 * n + 1];
    }
    let mut double = 0.0;
    for n in 0..n_sup {
        for m in 0..n_sup {
            if n != m {
                double += versine(th[n] - th[m]) * inv[n.abs_diff(m)]
                    - versine(th[n] + th[m]) * inv[n + m + 1];
            }
        }
    }
    let outside: f64 = th.iter().zip(&tail).map(|(&t, &tl)| versine(t) * tl).sum();
    single + beta_pow * (0.5 * double + outside)
}

/// Second-order expansion of `K_γ` written with the `(θ_n ∓ θ_m)²` kernel differences.
pub fn k2_expanded(beta_pow: f64, gamma: f64, theta: &AngleSequence) -> f64 {
    let th = theta.theta();
    let n_sup = th.len();
    let inv = neg_powers(gamma, 2 * n_sup);
    let tail = tails(&inv, n_sup);

    let mut single = 0.0;
    for (n, &t) in th.iter().enumerate() {
        single += 0.5 * (2 * n + 1) as f64 * t * t - beta_pow * t * t * inv[2 * n + 1];
    }
    let mut double = 0.0;
    for n in 0..n_sup {
        for m in 0..n_sup {
            if n != m {
                let d = th[n] - th[m];
                let s = th[n] + th[m];
                double += d * d * inv[n.abs_diff(m)] - s * s * inv[n + m + 1];
            }
        }
    }
    let outside: f64 = th.iter().zip(&tail).map(|(&t, &tl)| t * t * tl).sum();
    single + beta_pow * (0.25 * double + 0.5 * outside)
}

/// Second-order expansion with the telescoped diagonal `Σ_{k≤n} 2/k^γ` and the positive
/// kernel `(1−δ)/|n−m|^γ + 1/(n+m+1)^γ` separated.
pub fn k2_simplified(beta_pow: f64, gamma: f64, theta: &AngleSequence) -> f64 {
    let th = theta.theta();
    let n_sup = th.len();
    let inv = neg_powers(gamma, 2 * n_sup);

    let mut diag = 0.0;
    let mut prefix = 0.0;
    for (n, &t) in th.iter().enumerate() {
        if n > 0 {
            prefix += 2.0 * inv[n];
        }
        diag += ((2 * n + 1) as f64 + beta_pow * prefix) * t * t;
    }
    let mut cross = 0.0;
    for n in 0..n_sup {
        for m in 0..n_sup {
            let k2 = if n == m { 0.0 } else { inv[n.abs_diff(m)] };
            cross += th[n] * (k2 + inv[n + m + 1]) * th[m];
        }
    }
    0.5 * diag - 0.5 * beta_pow * cross
}

/// `Q_γ(Ξ) = ‖Ξ‖² − β^γ⟨Ξ, 𝔊^(N)Ξ⟩` with `N` the support of `Ξ`.
pub fn q_form(beta_pow: f64, gamma: f64, xi: &XiSequence) -> Result<f64> {
    let op = assemble(&ModelParams::with_gamma(gamma)?, xi.support())?;
    let gx = op.matrix().matvec(xi.xi());
    Ok(xi.norm_sq() - beta_pow * dot(xi.xi(), &gx))
}

/// Left-hand side of the Euler–Lagrange equations for `n` in the support:
/// `(2n+1) sin θ_n + β^γ Σ_{m≥0} [sin(θ_n−θ_m)/|n−m|^γ − sin(θ_n+θ_m)/(n+m+1)^γ]`,
/// with the `m = n` term of the first kernel omitted.
pub fn el_residual(beta_pow: f64, gamma: f64, theta: &AngleSequence) -> Vec<f64> {
    let th = theta.theta();
    let n_sup = th.len();
    let inv = neg_powers(gamma, 2 * n_sup);
    let tail = tails(&inv, n_sup);

    (0..n_sup)
        .map(|n| {
            let mut sum = 0.0;
            for m in 0..n_sup {
                if m != n {
                    sum += (th[n] - th[m]).sin() * inv[n.abs_diff(m)];
                }
                sum -= (th[n] + th[m]).sin() * inv[n + m + 1];
            }
            sum += th[n].sin() * tail[n];
            (2 * n + 1) as f64 * th[n].sin() + beta_pow * sum
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn seq(v: &[f64]) -> AngleSequence {
        AngleSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn change_of_variables() {
        assert_eq!(theta_to_xi(&seq(&[0.0, 0.0])).xi(), &[0.0, 0.0]);
        assert_eq!(theta_to_xi(&seq(&[1.0, 0.0])).xi(), &[1.0, 0.0]);
        let x = theta_to_xi(&seq(&[0.0, 1.0, 0.0]));
        assert!((x.xi()[1] - 3f64.sqrt()).abs() < 1e-16);
        let back = xi_to_theta(&x);
        assert!((back.theta()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tails_telescope() {
        // Direct partial sums of the defining series converge to the finite sum.
        let gamma = 1.7;
        let n_sup = 5;
        let inv = neg_powers(gamma, 2 * n_sup);
        let t = tails(&inv, n_sup);
        for (n, &tail) in t.iter().enumerate().take(n_sup) {
            let direct: f64 = (n_sup..200_000)
                .map(|m| ((m - n) as f64).powf(-gamma) - ((n + m + 1) as f64).powf(-gamma))
                .sum();
            assert!((direct - tail).abs() < 1e-6, "n={n}");
        }
    }

    #[test]
    fn zero_angles() {
        let z = AngleSequence::zeros(4);
        assert_eq!(k_gamma(1.3, 2.0, &z), 0.0);
        assert_eq!(k2_expanded(1.3, 2.0, &z), 0.0);
        assert_eq!(k2_simplified(1.3, 2.0, &z), 0.0);
        assert!(el_residual(0.7, 1.1, &z).iter().all(|&r| r == 0.0));
    }

    #[test]
    fn single_angle_without_coupling() {
        let t = seq(&[FRAC_PI_2]);
        assert!((k_gamma(0.0, 2.0, &t) - 1.0).abs() < 1e-15);
        assert!((k_gamma(1e-14, 2.0, &t) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn single_angle_quadratic_forms() {
        // ½θ² − β^γθ² from the single sum plus ½β^γθ² from the tail over m ≥ 1.
        let t = seq(&[1.0]);
        assert!(k2_expanded(1.0, 2.0, &t).abs() < 1e-15);
        assert!(k2_simplified(1.0, 2.0, &t).abs() < 1e-15);
        let e0 = XiSequence::new(vec![1.0]).unwrap();
        assert_eq!(q_form(1.0, 2.0, &e0).unwrap(), 0.0);
    }

    #[test]
    fn single_angle_residual() {
        // T_0 = 1 for support 1, so the residual is sin θ (1 + b) − b sin 2θ.
        for &(b, th, g) in &[(0.7, 0.3, 2.0), (2.5, 1.2, 0.6), (1.0, 0.01, 3.0)] {
            let r = el_residual(b, g, &seq(&[th]));
            let want = th.sin() * (1.0 + b) - b * (2.0 * th).sin();
            assert!((r[0] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn residual_is_gradient_of_functional() {
        let t = seq(&[0.4, 0.2, -0.1, 0.05]);
        let (b, g) = (0.9, 1.4);
        let r = el_residual(b, g, &t);
        let h = 1e-6;
        for n in 0..4 {
            let mut up = t.theta().to_vec();
            let mut dn = t.theta().to_vec();
            up[n] += h;
            dn[n] -= h;
            let d = (k_gamma(b, g, &seq(&up)) - k_gamma(b, g, &seq(&dn))) / (2.0 * h);
            assert!((d - r[n]).abs() < 1e-8, "n={n}: {d} vs {}", r[n]);
        }
    }

    #[test]
    fn minimizer_candidate_flag() {
        assert!(seq(&[0.0, 1.0, FRAC_PI_2]).is_minimizer_candidate());
        assert!(!seq(&[0.0, -0.1]).is_minimizer_candidate());
        assert!(!seq(&[2.0]).is_minimizer_candidate());
        assert!(AngleSequence::new(vec![]).is_err());
        assert!(AngleSequence::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn h_norm_matches_xi_norm() {
        let t = seq(&[0.3, -0.2, 0.7]);
        assert!((t.h_norm_sq() - theta_to_xi(&t).norm_sq()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn telescoping_identity(
            theta in prop::collection::vec(-1.5f64..1.5, 1..8),
            gamma in 0.4f64..3.0,
            b in 0.1f64..3.0,
        ) {
            let t = AngleSequence::new(theta).unwrap();
            let e = k2_expanded(b, gamma, &t);
            let s = k2_simplified(b, gamma, &t);
            let q = 0.5 * q_form(b, gamma, &theta_to_xi(&t)).unwrap();
            let scale = e.abs().max(t.h_norm_sq()).max(1e-300);
            prop_assert!((e - s).abs() <= 1e-12 * scale);
            prop_assert!((s - q).abs() <= 1e-12 * scale);
        }

        #[test]
        fn roundtrip(theta in prop::collection::vec(-3.0f64..3.0, 1..20)) {
            let t = AngleSequence::new(theta).unwrap();
            let back = xi_to_theta(&theta_to_xi(&t));
            for (a, b) in t.theta().iter().zip(back.theta()) {
                prop_assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
            }
        }
    }
}
