//! Exact largest eigenvalues of `𝔊^(N)(γ)` for `N ≤ 4` and the resulting lower bounds.
//!
//! The traces, adjugate traces and determinants are closed-form polynomials in the
//! negative powers `t^{−γ}` of the integers `t ≤ 343`. Each polynomial is stored as a list
//! of `(coefficient, base)` terms with a common denominator.

use crate::error::{Error, Result};
use crate::kernel::ModelParams;
use crate::INV_TWO_PI;

const MAX_BASE: usize = 343;
const ARCCOS_SLACK: f64 = 1e-12;
const SQRT_SLACK: f64 = 1e-12;

type Poly = &'static [(f64, usize)];

const TR3: Poly = &[(3.0, 5), (5.0, 3), (-6.0, 2), (-1.0, 1)];
const ADJ3: Poly = &[
    (-1.0, 16),
    (1.0, 15),
    (-3.0, 9),
    (-8.0, 6),
    (1.0, 5),
    (-10.0, 4),
    (3.0, 3),
    (-12.0, 2),
    (-18.0, 1),
];
const DET3: Poly = &[
    (-1.0, 27),
    (2.0, 24),
    (-1.0, 20),
    (-2.0, 18),
    (1.0, 16),
    (1.0, 15),
    (1.0, 12),
    (-2.0, 10),
    (2.0, 9),
    (4.0, 8),
    (4.0, 6),
    (8.0, 4),
    (-3.0, 5),
    (12.0, 2),
    (5.0, 1),
];
const DEN3: f64 = 15.0;

const TR4: Poly = &[(15.0, 7), (21.0, 5), (5.0, 3), (-72.0, 2), (-37.0, 1)];
const TR4_SQ: Poly = &[
    (225.0, 49),
    (630.0, 36),
    (1491.0, 25),
    (-900.0, 21),
    (4620.0, 16),
    (-900.0, 14),
    (6300.0, 12),
    (336.0, 10),
    (9685.0, 9),
    (-900.0, 7),
    (11880.0, 6),
    (-1764.0, 5),
    (18414.0, 4),
    (-3100.0, 3),
    (20028.0, 2),
    (28039.0, 1),
];
const TR4_CUBE: Poly = &[
    (3375.0, 343),
    (14175.0, 252),
    (19845.0, 180),
    (23625.0, 175),
    (-20250.0, 147),
    (9261.0, 125),
    (66150.0, 120),
    (70875.0, 112),
    (-28350.0, 108),
    (-20250.0, 98),
    (141750.0, 84),
    (46305.0, 80),
    (7875.0, 75),
    (130410.0, 72),
    (47250.0, 70),
    (111375.0, 63),
    (198450.0, 54),
    (-102816.0, 50),
    (-20250.0, 49),
    (200025.0, 48),
    (138915.0, 45),
    (109350.0, 42),
    (330750.0, 40),
    (-153090.0, 36),
    (-234360.0, 32),
    (730170.0, 30),
    (64125.0, 28),
    (-125875.0, 27),
    (-213066.0, 25),
    (179550.0, 24),
    (81000.0, 21),
    (645057.0, 20),
    (-557280.0, 18),
    (901215.0, 16),
    (330750.0, 15),
    (81000.0, 14),
    (1542510.0, 12),
    (-92736.0, 10),
    (631320.0, 9),
    (447012.0, 8),
    (54675.0, 7),
    (2299410.0, 6),
    (243432.0, 5),
    (310986.0, 4),
    (1331250.0, 3),
    (837036.0, 2),
    (784412.0, 1),
];
const DET4: Poly = &[
    (1.0, 256),
    (-3.0, 240),
    (1.0, 225),
    (2.0, 216),
    (2.0, 200),
    (-1.0, 189),
    (-6.0, 180),
    (2.0, 168),
    (2.0, 162),
    (-2.0, 160),
    (4.0, 150),
    (2.0, 144),
    (-1.0, 140),
    (-1.0, 135),
    (-2.0, 126),
    (-1.0, 125),
    (-2.0, 120),
    (1.0, 112),
    (1.0, 108),
    (1.0, 105),
    (3.0, 100),
    (-2.0, 96),
    (1.0, 84),
    (2.0, 81),
    (2.0, 75),
    (-8.0, 72),
    (-2.0, 70),
    (2.0, 63),
    (4.0, 60),
    (4.0, 56),
    (4.0, 54),
    (-8.0, 48),
    (-2.0, 45),
    (4.0, 42),
    (-4.0, 40),
    (6.0, 36),
    (-3.0, 35),
    (-12.0, 32),
    (-6.0, 30),
    (8.0, 28),
    (2.0, 27),
    (2.0, 25),
    (-28.0, 24),
    (5.0, 20),
    (-16.0, 18),
    (-24.0, 16),
    (-2.0, 15),
    (12.0, 14),
    (-44.0, 12),
    (12.0, 10),
    (-11.0, 9),
    (-32.0, 8),
    (5.0, 7),
    (-38.0, 6),
    (8.0, 5),
    (-41.0, 4),
    (-13.0, 3),
    (-30.0, 2),
    (-7.0, 1),
];
const DEN4: f64 = 105.0;

/// `t^{−γ}` for `t = 0..=343`, each computed once as `exp(−γ ln t)`.
struct NegPowers([f64; MAX_BASE + 1]);

impl NegPowers {
    fn new(gamma: f64) -> Self {
        let mut p = [0.0; MAX_BASE + 1];
        p[1] = 1.0;
        for (t, slot) in p.iter_mut().enumerate().skip(2) {
            *slot = (-gamma * (t as f64).ln()).exp();
        }
        Self(p)
    }

    fn eval(&self, poly: Poly, den: f64) -> f64 {
        poly.iter().map(|&(c, t)| c * self.0[t]).sum::<f64>() / den
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants2 {
    pub trace: f64,
    pub det: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants3 {
    pub trace: f64,
    /// Trace of the adjugate, the sum of the principal 2×2 minors.
    pub trace_adj: f64,
    pub det: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants4 {
    /// `tr M`.
    pub tr1: f64,
    /// `tr M²`.
    pub tr2: f64,
    /// `tr M³`.
    pub tr3: f64,
    pub det: f64,
}

fn check_gamma(gamma: f64) -> Result<()> {
    ModelParams::with_gamma(gamma).map(|_| ())
}

pub fn invariants_2(gamma: f64) -> Invariants2 {
    let p3 = (-gamma * 3f64.ln()).exp();
    let p2 = (-gamma * 2f64.ln()).exp();
    let p4 = (-gamma * 4f64.ln()).exp();
    Invariants2 {
        trace: (p3 + 1.0) / 3.0,
        det: (-p4 + p3 - 2.0 * p2 - 3.0) / 3.0,
    }
}

pub fn invariants_3(gamma: f64) -> Invariants3 {
    let p = NegPowers::new(gamma);
    Invariants3 {
        trace: p.eval(TR3, DEN3),
        trace_adj: p.eval(ADJ3, DEN3),
        det: p.eval(DET3, DEN3),
    }
}

pub fn invariants_4(gamma: f64) -> Invariants4 {
    let p = NegPowers::new(gamma);
    Invariants4 {
        tr1: p.eval(TR4, DEN4),
        tr2: p.eval(TR4_SQ, DEN4 * DEN4),
        tr3: p.eval(TR4_CUBE, DEN4 * DEN4 * DEN4),
        det: p.eval(DET4, DEN4),
    }
}

fn clamped_acos(x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 + ARCCOS_SLACK {
        return Err(Error::ArccosDomain { value: x });
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

fn clamped_sqrt(x: f64, quantity: &'static str) -> Result<f64> {
    if x.is_nan() || x < -SQRT_SLACK {
        return Err(Error::DegenerateQuartic { quantity, value: x });
    }
    Ok(x.max(0.0).sqrt())
}

/// Data of the trigonometric formula for the characteristic cubic of `𝔊^(3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicInvariants {
    /// `tr M`.
    pub r: f64,
    /// `(tr M)²/3 − tr adj M`.
    pub p: f64,
    /// `(2/27)(tr M)³ − (1/3) tr M · tr adj M + det M`.
    pub q: f64,
}

impl CubicInvariants {
    pub fn new(inv: &Invariants3) -> Result<Self> {
        let r = inv.trace;
        let p = r * r / 3.0 - inv.trace_adj;
        let q = 2.0 / 27.0 * r * r * r - r * inv.trace_adj / 3.0 + inv.det;
        if p.is_nan() || p <= 0.0 {
            return Err(Error::DegenerateCubic { p });
        }
        Ok(Self { r, p, q })
    }

    /// Root on the `k`-th trigonometric branch, `k ∈ {0, 1, 2}`; `k = 0` is the largest.
    pub fn root(&self, k: u32) -> Result<f64> {
        let arg = 0.5 * self.q * (27.0 / (self.p * self.p * self.p)).sqrt();
        let phi = clamped_acos(arg)?;
        let angle = (phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0;
        Ok(self.r / 3.0 + 2.0 * (self.p / 3.0).sqrt() * angle.cos())
    }
}

/// Coefficients of `η⁴ + Aη³ + Bη² + Cη + D = det(η − 𝔊^(4))` and the resolvent data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub x: f64,
    pub y: f64,
    /// Positive root of the resolvent cubic.
    pub z: f64,
}

impl QuarticCoefficients {
    pub fn new(inv: &Invariants4) -> Result<Self> {
        let t = inv.tr1;
        let a = -t;
        let b = 0.5 * (t * t - inv.tr2);
        let c = -(t * t * t - 3.0 * inv.tr2 * t + 2.0 * inv.tr3) / 6.0;
        let d = inv.det;

        let x = 2.0 * b * b * b - 9.0 * a * b * c + 27.0 * c * c + 27.0 * a * a * d - 72.0 * b * d;
        let y = b * b - 3.0 * a * c + 12.0 * d;
        if y.is_nan() || y < -SQRT_SLACK {
            return Err(Error::DegenerateQuartic {
                quantity: "Y",
                value: y,
            });
        }
        let y = y.max(0.0);
        let sy = y.sqrt();
        let z = if sy == 0.0 {
            (-b + 0.375 * a * a) / 3.0
        } else {
            let phi = clamped_acos(x / (2.0 * sy * sy * sy))?;
            (sy * (phi / 3.0).cos() - b + 0.375 * a * a) / 3.0
        };
        if z.is_nan() || z <= 0.0 {
            return Err(Error::DegenerateQuartic {
                quantity: "Z",
                value: z,
            });
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            x,
            y,
            z,
        })
    }

    /// `η⁴ + Aη³ + Bη² + Cη + D`.
    pub fn char_poly(&self, eta: f64) -> f64 {
        (((eta + self.a) * eta + self.b) * eta + self.c) * eta + self.d
    }

    /// The largest root `−A/4 + √(Z/2) + √(3A²/16 − B/2 − Z/2 − (A³ − 4AB + 8C)/(16√(2Z)))`.
    pub fn largest_root(&self) -> Result<f64> {
        let (a, b, c, z) = (self.a, self.b, self.c, self.z);
        let inner = 3.0 * a * a / 16.0
            - 0.5 * b
            - 0.5 * z
            - (a * a * a - 4.0 * a * b + 8.0 * c) / (16.0 * (2.0 * z).sqrt());
        Ok(-0.25 * a + (0.5 * z).sqrt() + clamped_sqrt(inner, "inner radicand")?)
    }
}

/// Largest eigenvalue of `𝔊^(2)(γ)` by the quadratic formula.
pub fn eig_max_2(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let inv = invariants_2(gamma);
    Ok(0.5 * (inv.trace + (inv.trace * inv.trace - 4.0 * inv.det).sqrt()))
}

/// Largest eigenvalue of `𝔊^(3)(γ)` by the trigonometric cubic formula.
pub fn eig_max_3(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    CubicInvariants::new(&invariants_3(gamma))?.root(0)
}

/// Largest eigenvalue of `𝔊^(4)(γ)` through the resolvent cubic.
pub fn eig_max_4(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    QuarticCoefficients::new(&invariants_4(gamma))?.largest_root()
}

/// `(g/2π)·𝔤^(N)(γ)^{1/γ}` for `N ∈ {1, 2, 3, 4}`.
pub fn tc_lower_closed(params: &ModelParams, n: usize) -> Result<f64> {
    let gamma = params.gamma();
    let eig = match n {
        1 => return Ok(params.g() * INV_TWO_PI),
        2 => eig_max_2(gamma)?,
        3 => eig_max_3(gamma)?,
        4 => eig_max_4(gamma)?,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "closed forms exist for N = 1..=4, not {n}"
            )))
        }
    };
    Ok(params.g() * INV_TWO_PI * (eig.ln() / gamma).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::assemble;
    use crate::linalg::{jacobi_eigen, DenseMatrix};

    fn jacobi_max(gamma: f64, n: usize) -> f64 {
        let a = assemble(&ModelParams::with_gamma(gamma).unwrap(), n).unwrap();
        *jacobi_eigen(a.matrix(), 100).unwrap().values.last().unwrap()
    }

    fn det3(m: &DenseMatrix) -> f64 {
        m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
            - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
            + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
    }

    #[test]
    fn two_by_two_invariants() {
        let inv = invariants_2(2.0);
        assert!((inv.trace - 10.0 / 27.0).abs() < 1e-15);
        assert!((inv.det + 1.150_462_963_0).abs() < 1e-10);
        let inv = invariants_2(1e-9);
        assert!((inv.trace - 2.0 / 3.0).abs() < 1e-8);
        assert!((inv.det + 5.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn three_by_three_invariants() {
        assert!((invariants_3(1e-12).trace - 1.0 / 15.0).abs() < 1e-10);
        assert!((invariants_3(1.0).trace + 0.115_555_555_6).abs() < 1e-10);
        let a = assemble(&ModelParams::with_gamma(2.0).unwrap(), 3).unwrap();
        assert!((invariants_3(2.0).det - det3(a.matrix())).abs() < 1e-14);
    }

    #[test]
    fn four_by_four_trace_oracles() {
        let inv = invariants_4(2.0);
        assert!((inv.tr1 + 0.507_603_066_6).abs() < 1e-10);
        for &g in &[0.3, 0.77, 1.0, 2.0, 3.1, 4.6] {
            let a = assemble(&ModelParams::with_gamma(g).unwrap(), 4).unwrap();
            let inv = invariants_4(g);
            assert!((inv.tr1 - a.matrix().trace()).abs() < 1e-14);
            assert!((inv.tr2 - a.matrix().frobenius_sq()).abs() < 1e-13);
        }
    }

    #[test]
    fn golden_eigenvalues_at_two() {
        let e2 = eig_max_2(2.0).unwrap();
        assert!((e2 - (60.0 + 3.0 * 13819f64.sqrt()) / 324.0).abs() < 1e-14);
        assert!((e2 - 1.273_650_396_3).abs() < 1e-10);

        let e3 = eig_max_3(2.0).unwrap();
        assert!((e3 - jacobi_max(2.0, 3)).abs() < 1e-12);
        assert!((e3 - 1.30823).abs() < 1e-5);

        let e4 = eig_max_4(2.0).unwrap();
        let two_pi_t = 2.0 * std::f64::consts::PI * 0.182_513_710_2;
        assert!((e4 - two_pi_t * two_pi_t).abs() < 1e-9);
    }

    #[test]
    fn asymptotics() {
        assert!((eig_max_2(1e3).unwrap() - (1.0 + 37f64.sqrt()) / 6.0).abs() < 1e-3);
        assert!((eig_max_2(1e-3).unwrap() - 5.0 / 3.0).abs() < 1e-3);
        assert!((eig_max_3(1e-3).unwrap() - 31.0 / 15.0).abs() < 1e-3);

        // At γ = ∞ only the 1^−γ terms survive.
        let s3 = 3f64.sqrt();
        let s15 = 15f64.sqrt();
        let lim = DenseMatrix::from_rows(&[
            vec![1.0, 1.0 / s3, 0.0],
            vec![1.0 / s3, -2.0 / 3.0, 1.0 / s15],
            vec![0.0, 1.0 / s15, -0.4],
        ]);
        let want = *jacobi_eigen(&lim, 50).unwrap().values.last().unwrap();
        assert!((eig_max_3(500.0).unwrap() - want).abs() < 1e-12);
        let printed = (18.0 * 10f64.sqrt() * ((23.0 * 10f64.sqrt() / 120.0).acos() / 3.0).cos()
            - 1.0)
            / 45.0;
        assert!((want - printed).abs() < 1e-3);
    }

    #[test]
    fn large_gamma_quartic() {
        let e = eig_max_4(50.0).unwrap();
        assert!((e - jacobi_max(50.0, 4)).abs() < 1e-6);
        assert!((e.powf(1.0 / 50.0) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn closed_forms_match_jacobi_on_grid() {
        for k in 0..28 {
            let g = 0.4 + 0.1 * k as f64;
            assert!((eig_max_2(g).unwrap() - jacobi_max(g, 2)).abs() < 1e-12, "N=2 γ={g}");
            assert!((eig_max_3(g).unwrap() - jacobi_max(g, 3)).abs() < 1e-12, "N=3 γ={g}");
            assert!((eig_max_4(g).unwrap() - jacobi_max(g, 4)).abs() < 1e-12, "N=4 γ={g}");
        }
    }

    #[test]
    fn quartic_residual_small() {
        for k in 0..28 {
            let g = 0.4 + 0.1 * k as f64;
            let q = QuarticCoefficients::new(&invariants_4(g)).unwrap();
            let e = q.largest_root().unwrap();
            assert!(q.char_poly(e).abs() <= 1e-10);
            assert!(q.z > 0.0);
            let a = assemble(&ModelParams::with_gamma(g).unwrap(), 4).unwrap();
            for l in jacobi_eigen(a.matrix(), 50).unwrap().values {
                assert!(q.char_poly(l).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn cubic_branches_cover_spectrum() {
        let c = CubicInvariants::new(&invariants_3(1.4)).unwrap();
        let a = assemble(&ModelParams::with_gamma(1.4).unwrap(), 3).unwrap();
        let mut roots: Vec<f64> = (0..3).map(|k| c.root(k).unwrap()).collect();
        roots.sort_by(f64::total_cmp);
        let eig = jacobi_eigen(a.matrix(), 50).unwrap().values;
        for (r, e) in roots.iter().zip(&eig) {
            assert!((r - e).abs() < 1e-12);
        }
    }

    #[test]
    fn lower_bounds_at_two() {
        let p = ModelParams::with_gamma(2.0).unwrap();
        assert_eq!(tc_lower_closed(&p, 1).unwrap(), INV_TWO_PI);
        assert!((tc_lower_closed(&p, 2).unwrap() - 0.179_616_094_4).abs() < 1e-9);
        assert!((tc_lower_closed(&p, 3).unwrap() - 0.182_038_3).abs() < 1e-6);
        assert!((tc_lower_closed(&p, 4).unwrap() - 0.182_513_710_2).abs() < 1e-9);
        assert!(tc_lower_closed(&p, 5).is_err());

        let scaled = ModelParams::new(2.0, 3.5).unwrap();
        let ratio = tc_lower_closed(&scaled, 4).unwrap() / tc_lower_closed(&p, 4).unwrap();
        assert!((ratio - 3.5).abs() < 1e-14);
    }

    #[test]
    fn chain_is_strictly_increasing() {
        for k in 0..28 {
            let p = ModelParams::with_gamma(0.4 + 0.1 * k as f64).unwrap();
            let t: Vec<f64> = (1..=4).map(|n| tc_lower_closed(&p, n).unwrap()).collect();
            assert!(t.windows(2).all(|w| w[0] < w[1]), "{t:?}");
        }
    }

    #[test]
    fn sign_facts() {
        for &g in &[1e-3, 0.1, 0.5, 1.0, 4.0, 40.0, 400.0] {
            let inv = invariants_2(g);
            assert!(inv.trace > 0.0 && inv.det < 0.0);
            assert!(CubicInvariants::new(&invariants_3(g)).unwrap().p > 0.0);
        }
        assert!(eig_max_2(-1.0).is_err());
    }

    #[test]
    fn acos_clamping() {
        assert_eq!(clamped_acos(1.0 + 1e-13).unwrap(), 0.0);
        assert!(matches!(
            clamped_acos(1.0 + 1e-9),
            Err(Error::ArccosDomain { .. })
        ));
    }
}
