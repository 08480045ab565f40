//! Riemann zeta function, the closed-form upper bound `T_c*` and Hilbert–Schmidt
//! diagnostics of the three operator blocks.

use crate::error::{Error, Result};
use crate::kernel::{operator_parts, ModelParams};
use crate::INV_TWO_PI;

/// `ε(γ) = min(γ, 0.65)`.
pub const EPSILON_CAP: f64 = 0.65;

/// `B_2, B_4, …, B_12`.
const BERNOULLI: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// `ζ(s)` for real `s > 1`: direct sum of the first `cutoff_m − 1` terms plus the
/// Euler–Maclaurin tail `M^{1−s}/(s−1) + M^{−s}/2 + Σ_k B_{2k}/(2k)!·(s)_{2k−1}·M^{1−s−2k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZetaEvaluator {
    cutoff_m: u32,
    correction_order: usize,
}

impl Default for ZetaEvaluator {
    fn default() -> Self {
        Self {
            cutoff_m: 20,
            correction_order: BERNOULLI.len(),
        }
    }
}

impl ZetaEvaluator {
    /// `correction_order` counts Bernoulli terms and is capped at 6 (through `B_12`).
    pub fn new(cutoff_m: u32, correction_order: usize) -> Result<Self> {
        if cutoff_m < 2 || correction_order > BERNOULLI.len() {
            return Err(Error::InvalidParameter(format!(
                "zeta evaluator needs cutoff >= 2 and at most {} correction terms",
                BERNOULLI.len()
            )));
        }
        Ok(Self {
            cutoff_m,
            correction_order,
        })
    }

    pub fn cutoff_m(&self) -> u32 {
        self.cutoff_m
    }

    pub fn correction_order(&self) -> usize {
        self.correction_order
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        if s.is_nan() || s <= 1.0 + 1e-6 {
            return Err(Error::DivergentZeta { s });
        }
        let m = self.cutoff_m as f64;
        // Sum the head from small to large terms.
        let mut sum = 0.0;
        for n in (1..self.cutoff_m).rev() {
            sum += (n as f64).powf(-s);
        }
        let m_s = m.powf(-s);
        let mut tail = m * m_s / (s - 1.0) + 0.5 * m_s;
        // `rising` holds s(s+1)…(s+2k−2)/(2k)! and `mpow` holds M^{1−s−2k}.
        let mut rising = s / 2.0;
        let mut mpow = m_s / m;
        for (k, b) in BERNOULLI.iter().take(self.correction_order).enumerate() {
            if k > 0 {
                let j = (2 * k) as f64;
                rising *= (s + j - 1.0) * (s + j) / ((j + 1.0) * (j + 2.0));
                mpow /= m * m;
            }
            tail += b * rising * mpow;
        }
        Ok(sum + tail)
    }
}

pub fn zeta(s: f64) -> Result<f64> {
    ZetaEvaluator::default().eval(s)
}

pub fn epsilon_of_gamma(gamma: f64) -> f64 {
    gamma.min(EPSILON_CAP)
}

/// `√((2^{1+ε} − 1)·ζ(1+ε)·ζ(1+2γ−ε))` for a free `ε ∈ (0, min(2γ, 1))`.
fn cauchy_schwarz_factor(gamma: f64, eps: f64) -> Result<f64> {
    ModelParams::with_gamma(gamma)?;
    if !(eps > 0.0 && eps < (2.0 * gamma).min(1.0)) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {eps} outside (0, min(2 gamma, 1))"
        )));
    }
    let z = ZetaEvaluator::default();
    let w = (2f64).powf(1.0 + eps) - 1.0;
    Ok((w * z.eval(1.0 + eps)? * z.eval(1.0 + 2.0 * gamma - eps)?).sqrt())
}

/// Bound on `ρ(𝔊₂(γ))` at `ε = ε(γ)`.
pub fn rho_bound_g2(gamma: f64) -> Result<f64> {
    cauchy_schwarz_factor(gamma, epsilon_of_gamma(gamma))
}

/// Bound on `ρ(𝔊₃(γ))`, one more than the `𝔊₂` bound.
pub fn rho_bound_g3(gamma: f64) -> Result<f64> {
    Ok(1.0 + rho_bound_g2(gamma)?)
}

/// `1 + 2√(…)` at a free `ε`; used to locate the best `ε`.
pub(crate) fn bound_base(gamma: f64, eps: f64) -> Result<f64> {
    Ok(1.0 + 2.0 * cauchy_schwarz_factor(gamma, eps)?)
}

/// Sum of the `𝔊₂` and `𝔊₃` radius bounds, which dominates the largest eigenvalue `𝔤(γ)`.
pub fn eigenvalue_upper(gamma: f64) -> Result<f64> {
    bound_base(gamma, epsilon_of_gamma(gamma))
}

/// `T_c* = (g/2π)·[1 + 2√((2^{1+ε}−1)ζ(1+ε)ζ(1+2γ−ε))]^{1/γ}`.
pub fn tc_upper(params: &ModelParams) -> Result<f64> {
    let gamma = params.gamma();
    let base = bound_base(gamma, epsilon_of_gamma(gamma))?;
    Ok(params.g() * INV_TWO_PI * (base.ln() / gamma).exp())
}

/// Squared Frobenius norms of the `N×N` blocks of `𝔊₁, 𝔊₂, 𝔊₃` and the bound
/// `ζ²(1+γ)` on the infinite `𝔊₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsDiagnostics {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub bound3: f64,
}

impl HsDiagnostics {
    pub fn within_bound(&self) -> bool {
        self.f3 <= self.bound3
    }
}

pub fn hs_norm_diagnostics(gamma: f64, n: usize) -> Result<HsDiagnostics> {
    ModelParams::with_gamma(gamma)?;
    if n == 0 {
        return Err(Error::InvalidParameter(
            "truncation dimension must be at least 1".into(),
        ));
    }
    let parts = operator_parts(gamma, n);
    let z = zeta(1.0 + gamma)?;
    Ok(HsDiagnostics {
        f1: parts.g1_diag.iter().map(|x| x * x).sum(),
        f2: parts.g2.frobenius_sq(),
        f3: parts.g3.frobenius_sq(),
        bound3: z * z,
    })
}
