//! Rigorous bounds on the critical temperature `T_c(g, γ)` of the Eliashberg γ-model.
//!
//! The linearized gap problem reduces to the largest eigenvalue `𝔤(γ)` of a compact
//! self-adjoint operator `𝔊(γ) = −𝔊₁ + 𝔊₂ + 𝔊₃` on `ℓ²(ℕ₀)`, with
//! `T_c = (g/2π)·𝔤(γ)^{1/γ}`. Every upper-left `N×N` truncation gives a lower bound,
//! and a zeta-function estimate on `ρ(𝔊₂) + ρ(𝔊₃)` gives an upper bound.
//!
//! Module map:
//! - [`kernel`]: the interaction, the three operator blocks and the truncated matrix.
//! - [`closed_form`]: exact spectra and lower bounds for `N ≤ 4`.
//! - [`spectral`]: iterative eigen-solves, positivity certificate, fixed-point operator, sweeps.
//! - [`upper`]: the Riemann zeta function, the upper bound and Hilbert–Schmidt diagnostics.
//! - [`forms`]: condensation-energy functional, its quadratic expansions and the
//!   Euler–Lagrange residual.
//! - [`dd`], [`real`], [`linalg`]: extended-precision scalar and dense linear algebra.

pub mod closed_form;
pub mod dd;
pub mod error;
pub mod forms;
pub mod kernel;
pub mod linalg;
pub mod real;
pub mod spectral;
pub mod upper;

pub use error::{Error, Result};
pub use kernel::{assemble, ModelParams, TruncatedOperator};

/// `1/(2π)`, the `γ → ∞` limit of `T_c/g`.
pub const INV_TWO_PI: f64 = 1.0 / (2.0 * std::f64::consts::PI);

/// Arithmetic used for assembly and eigen-solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// IEEE 754 binary64.
    #[default]
    Double,
    /// Double-double software arithmetic (about 32 significant digits).
    Extended,
}
