//! The γ-model interaction and the truncated operator `𝔊^(N)(γ) = −𝔊₁ + 𝔊₂ + 𝔊₃`.
//!
//! Everything is dimensionless: `g = 1` and Matsubara frequencies in units of `2πT`, so
//! the interaction between indices `n ≠ m` is `1/|n − m|^γ`. Row and column indices are
//! 0-based.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::real::Real;

/// Exponent `γ` and energy scale `g` of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    gamma: f64,
    g: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, g: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be positive (got {gamma})"
            )));
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "g must be positive (got {g})"
            )));
        }
        Ok(Self { gamma, g })
    }

    /// `g = 1`.
    pub fn with_gamma(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

/// Dimensionless interaction `1/|n − m|^γ`, zero on the diagonal.
pub fn v_gamma(params: &ModelParams, n: i64, m: i64) -> f64 {
    if n == m {
        0.0
    } else {
        1.0 / (n.abs_diff(m) as f64).powf(params.gamma)
    }
}

/// `(1/(2n+1))·Σ_{k=1}^{n} 2/k^γ`.
pub fn g1_diagonal(gamma: f64, n: usize) -> f64 {
    let mut sum = 0.0;
    for k in 1..=n {
        sum += 2.0 / (k as f64).powf(gamma);
    }
    sum / (2 * n + 1) as f64
}

/// `(1 − δ_{nm}) / (√(2n+1)·|n−m|^γ·√(2m+1))`.
pub fn g2_element(gamma: f64, n: usize, m: usize) -> f64 {
    if n == m {
        return 0.0;
    }
    let d = (n.abs_diff(m) as f64).powf(gamma);
    1.0 / (odd_sqrt::<f64>(n) * d * odd_sqrt::<f64>(m))
}

/// `1 / (√(2n+1)·(n+m+1)^γ·√(2m+1))`.
pub fn g3_element(gamma: f64, n: usize, m: usize) -> f64 {
    let s = ((n + m + 1) as f64).powf(gamma);
    1.0 / (odd_sqrt::<f64>(n) * s * odd_sqrt::<f64>(m))
}

fn odd_sqrt<T: Real>(n: usize) -> T {
    T::from_f64((2 * n + 1) as f64).sqrt()
}

/// `k^γ` for `k = 0..=kmax` (entry 0 unused).
fn power_table<T: Real>(gamma: T, kmax: usize) -> Vec<T> {
    let mut p = Vec::with_capacity(kmax + 1);
    p.push(T::zero());
    for k in 1..=kmax {
        p.push(if k == 1 {
            T::one()
        } else {
            T::from_f64(k as f64).powf(gamma)
        });
    }
    p
}

/// The three blocks of `𝔊^(N)` kept apart.
#[derive(Debug, Clone)]
pub struct OperatorParts<T = f64> {
    /// Diagonal of `𝔊₁`.
    pub g1_diag: Vec<T>,
    pub g2: DenseMatrix<T>,
    pub g3: DenseMatrix<T>,
}

impl<T: Real> OperatorParts<T> {
    pub fn dim(&self) -> usize {
        self.g1_diag.len()
    }

    /// `𝔊₂ + 𝔊₃`, entrywise positive.
    pub fn positive_part(&self) -> DenseMatrix<T> {
        let n = self.dim();
        DenseMatrix::from_fn(n, |i, j| self.g2[(i, j)] + self.g3[(i, j)])
    }

    /// `−𝔊₁ + 𝔊₂ + 𝔊₃`, summed in that order.
    pub fn combined(&self) -> DenseMatrix<T> {
        let n = self.dim();
        DenseMatrix::from_fn(n, |i, j| {
            let d = if i == j { -self.g1_diag[i] } else { T::zero() };
            d + self.g2[(i, j)] + self.g3[(i, j)]
        })
    }
}

/// Builds the three blocks at dimension `n` in arithmetic `T`.
///
/// Upper triangles are filled row-major and mirrored, the `𝔊₁` prefix sums run in index
/// order, and every entry depends only on its indices, so blocks nest exactly.
pub fn operator_parts<T: Real>(gamma: T, n: usize) -> OperatorParts<T> {
    let pow = power_table(gamma, 2 * n);
    let roots: Vec<T> = (0..n).map(odd_sqrt::<T>).collect();

    let mut g1_diag = Vec::with_capacity(n);
    let mut prefix = T::zero();
    for (i, &p) in pow.iter().enumerate().take(n) {
        if i > 0 {
            prefix += T::from_f64(2.0) / p;
        }
        g1_diag.push(prefix / T::from_f64((2 * i + 1) as f64));
    }

    let mut g2 = DenseMatrix::zeros(n);
    let mut g3 = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let e3 = T::one() / (roots[i] * pow[i + j + 1] * roots[j]);
            g3[(i, j)] = e3;
            g3[(j, i)] = e3;
            if j > i {
                let e2 = T::one() / (roots[i] * pow[j - i] * roots[j]);
                g2[(i, j)] = e2;
                g2[(j, i)] = e2;
            }
        }
    }
    OperatorParts { g1_diag, g2, g3 }
}

/// The dense symmetric block `𝔊^(N)(γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    gamma: f64,
    matrix: DenseMatrix<f64>,
}

impl TruncatedOperator {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn matrix(&self) -> &DenseMatrix<f64> {
        &self.matrix
    }

    /// Upper-left `k×k` block; identical to `assemble` at dimension `k`.
    pub fn block(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.dim() {
            return Err(Error::InvalidParameter(format!(
                "block size {k} outside 1..={}",
                self.dim()
            )));
        }
        Ok(Self {
            gamma: self.gamma,
            matrix: self.matrix.block(k),
        })
    }

    pub fn entries(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.matrix.row(i).to_vec()).collect()
    }
}

/// Assembles `𝔊^(N)(γ)` in binary64.
pub fn assemble(params: &ModelParams, n: usize) -> Result<TruncatedOperator> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "truncation dimension must be at least 1".into(),
        ));
    }
    Ok(TruncatedOperator {
        gamma: params.gamma,
        matrix: operator_parts(params.gamma, n).combined(),
    })
}
