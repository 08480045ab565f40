use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// `p ≤ 0` in the trigonometric cubic formula.
    #[error("degenerate cubic: p = {p:e} must be positive")]
    DegenerateCubic { p: f64 },

    /// An `arccos` argument farther than the clamping tolerance outside `[−1, 1]`.
    #[error("arccos argument {value} outside [-1, 1]")]
    ArccosDomain { value: f64 },

    #[error("degenerate quartic: {quantity} = {value:e}")]
    DegenerateQuartic { quantity: &'static str, value: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("lower bound decreased from N = {previous_n} to N = {n}: {previous:.15} -> {current:.15}")]
    MonotonicityViolation {
        previous_n: usize,
        n: usize,
        previous: f64,
        current: f64,
    },

    #[error("zeta series diverges at s = {s}")]
    DivergentZeta { s: f64 },
}
