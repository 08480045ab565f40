//! Dense symmetric linear algebra: storage, cyclic Jacobi, shifted power iteration and
//! the Perron root of nonnegative matrices.

use crate::error::{Error, Result};
use crate::real::Real;

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T = f64> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from its rows. Panics if the rows are ragged or not square.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            data: rows.concat(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Upper-left `k×k` block.
    pub fn block(&self, k: usize) -> Self {
        assert!(k <= self.n);
        Self::from_fn(k, |i, j| self[(i, j)])
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.n {
            t += self[(i, i)];
        }
        t
    }

    /// Sum of squared entries.
    pub fn frobenius_sq(&self) -> T {
        let mut s = T::zero();
        for &x in &self.data {
            s += x * x;
        }
        s
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            n: self.n,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut s = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

pub fn norm2<T: Real>(x: &[T]) -> T {
    dot(x, x).sqrt()
}

/// Scales `x` to unit Euclidean norm. Leaves the zero vector alone.
pub fn normalize<T: Real>(x: &mut [T]) {
    let nrm = norm2(x);
    if nrm > T::zero() {
        for v in x.iter_mut() {
            *v = *v / nrm;
        }
    }
}

/// `‖A v − λ v‖₂` evaluated from scratch.
pub fn eigen_residual<T: Real>(a: &DenseMatrix<T>, lambda: T, v: &[T]) -> T {
    let av = a.matvec(v);
    let mut s = T::zero();
    for (&y, &x) in av.iter().zip(v) {
        let r = y - lambda * x;
        s += r * r;
    }
    s.sqrt()
}

/// Full spectrum of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector of `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

/// Cyclic Jacobi rotations with the usual threshold strategy: during the first three
/// sweeps only elements above `sum|a_pq| / (5 n²)` are rotated, later an element that is
/// negligible against both diagonal entries is set to zero.
pub fn jacobi_eigen(a: &DenseMatrix<f64>, max_sweeps: usize) -> Result<SymmetricEigen> {
    let n = a.dim();
    let mut m = a.data.clone();
    // Rows of `v` are the eigenvectors.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let mut sweeps = 0;
    loop {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p * n + q].abs();
            }
        }
        if off == 0.0 {
            break;
        }
        if sweeps >= max_sweeps {
            return Err(Error::NoConvergence {
                iterations: sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        let threshold = if sweeps < 4 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };

        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                let g = 100.0 * apq.abs();
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                if apq.abs() <= threshold || apq == 0.0 {
                    continue;
                }
                let h = aqq - app;
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    m[k * n + p] = np;
                    m[p * n + k] = np;
                    m[k * n + q] = nq;
                    m[q * n + k] = nq;
                }
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;

                let (head, tail) = v.split_at_mut(q * n);
                let vp = &mut head[p * n..(p + 1) * n];
                let vq = &mut tail[..n];
                for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                    let xp = *x;
                    let xq = *y;
                    *x = c * xp - s * xq;
                    *y = s * xp + c * xq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&i| v[i * n..(i + 1) * n].to_vec())
        .collect();
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Outcome of an iterative dominant-eigenpair computation.
#[derive(Debug, Clone)]
pub struct PowerOutcome<T> {
    pub lambda: T,
    pub vector: Vec<T>,
    pub residual: T,
    pub iterations: usize,
}

/// Power iteration on `A + shift·I` for the algebraically largest eigenpair of a symmetric
/// matrix. The shift must make `λ_max + shift` the eigenvalue of largest modulus.
/// Stops once `‖A v − λ v‖₂ ≤ tol·max(1, |λ|)` with `λ` the Rayleigh quotient.
pub fn shifted_power<T: Real>(
    a: &DenseMatrix<T>,
    shift: T,
    start: Vec<T>,
    tol: f64,
    max_iter: usize,
) -> Result<PowerOutcome<T>> {
    let n = a.dim();
    assert_eq!(start.len(), n);
    let mut x = start;
    normalize(&mut x);
    let mut residual = f64::INFINITY;
    for it in 0..=max_iter {
        let ax = a.matvec(&x);
        let lambda = dot(&x, &ax);
        let mut r2 = T::zero();
        for (&y, &xi) in ax.iter().zip(&x) {
            let r = y - lambda * xi;
            r2 += r * r;
        }
        let r = r2.sqrt();
        residual = r.to_f64();
        if residual <= tol * lambda.to_f64().abs().max(1.0) {
            return Ok(PowerOutcome {
                lambda,
                vector: x,
                residual: r,
                iterations: it,
            });
        }
        if it == max_iter {
            break;
        }
        x = ax
            .iter()
            .zip(&x)
            .map(|(&y, &xi)| y + shift * xi)
            .collect();
        normalize(&mut x);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// Perron root of an entrywise nonnegative matrix.
#[derive(Debug, Clone)]
pub struct PerronOutcome {
    pub radius: f64,
    /// Collatz–Wielandt bracket `min (Mx)_i/x_i ≤ ρ ≤ max (Mx)_i/x_i` at exit.
    pub lower: f64,
    pub upper: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
}

/// Power iteration from the all-ones vector, stopped when the Collatz–Wielandt bracket
/// has relative width `≤ tol`. The zero matrix has radius 0.
pub fn perron_root(m: &DenseMatrix<f64>, tol: f64, max_iter: usize) -> Result<PerronOutcome> {
    let n = m.dim();
    if m.as_slice().iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::InvalidParameter(
            "spectral_radius requires a finite entrywise nonnegative matrix".into(),
        ));
    }
    if m.as_slice().iter().all(|&x| x == 0.0) {
        return Ok(PerronOutcome {
            radius: 0.0,
            lower: 0.0,
            upper: 0.0,
            vector: vec![1.0 / (n as f64).sqrt(); n],
            iterations: 0,
        });
    }
    // Adding the identity keeps a reducible or periodic matrix from oscillating.
    let mut x = vec![1.0; n];
    normalize(&mut x);
    let mut last = (0.0, f64::INFINITY);
    for it in 0..=max_iter {
        let y = m.matvec(&x);
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for (&yi, &xi) in y.iter().zip(&x) {
            if xi > 0.0 {
                let r = yi / xi;
                lo = lo.min(r);
                hi = hi.max(r);
            } else if yi > 0.0 {
                hi = f64::INFINITY;
            } else {
                lo = 0.0;
            }
        }
        last = (lo, hi);
        if hi - lo <= tol * hi {
            let rayleigh = dot(&x, &y) / dot(&x, &x);
            return Ok(PerronOutcome {
                radius: rayleigh.clamp(lo, hi),
                lower: lo,
                upper: hi,
                vector: x,
                iterations: it,
            });
        }
        if it == max_iter {
            break;
        }
        x = y.iter().zip(&x).map(|(&yi, &xi)| yi + xi).collect();
        normalize(&mut x);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: last.1 - last.0,
    })
}
