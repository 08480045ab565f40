//! Double-double arithmetic: an unevaluated sum `hi + lo` of two binary64 numbers with
//! `|lo| ≤ ulp(hi)/2`, giving roughly 106 significand bits (≈ 32 decimal digits).
//!
//! Addition and multiplication use the error-free transformations `two_sum` and an
//! FMA-based `two_prod`. `exp` uses argument reduction by `ln 2` and `2⁻⁹` followed by a
//! Taylor series; `ln` is two Newton steps on `exp`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const LN_2: Self = Self {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_3e-17,
    };
    pub const PI: Self = Self {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    /// `2⁻¹⁰⁴`, the relative rounding unit.
    pub const EPSILON: f64 = 4.930_380_657_631_324e-32;

    /// Builds from two components, renormalizing so that `|lo| ≤ ulp(hi)/2`.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    /// Exact scaling by `2^k` (barring overflow and underflow).
    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Self {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::ZERO
            } else {
                Self::from_f64(f64::NAN)
            };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let (p, e) = two_prod(ax, ax);
        let diff = (self - Self { hi: p, lo: e }).hi;
        let (hi, lo) = two_sum(ax, diff * (x * 0.5));
        Self { hi, lo }
    }

    pub fn exp(self) -> Self {
        const LOG2_INV_SCALE: i32 = 9;
        const TERMS: usize = 14;

        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::ONE;
        }
        let k = (self.hi / Self::LN_2.hi).round();
        let r = (self - Self::LN_2.mul_f64(k)).ldexp(-LOG2_INV_SCALE);

        // expm1(r) by Taylor series, |r| ≤ ln2/1024.
        let mut term = r;
        let mut sum = r;
        for i in 2..=TERMS {
            term = term * r / Self::from_f64(i as f64);
            sum += term;
            if term.hi.abs() <= 1e-36 * sum.hi.abs() {
                break;
            }
        }
        // (1 + s)² − 1 = 2s + s², repeated to undo the 2⁻⁹ scaling.
        for _ in 0..LOG2_INV_SCALE {
            sum = sum.mul_f64(2.0) + sum.sqr();
        }
        (sum + Self::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(if self.hi == 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            });
        }
        if self.hi == 1.0 && self.lo == 0.0 {
            return Self::ZERO;
        }
        let mut y = Self::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::ONE;
        }
        y
    }

    /// `self^p` for `self > 0`.
    pub fn powf(self, p: Self) -> Self {
        (p * self.ln()).exp()
    }

    /// Decimal expansion with `digits` digits after the point, truncated toward zero.
    pub fn to_decimal_string(self, digits: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        let mut out = String::new();
        let mut x = self;
        if x.hi < 0.0 {
            out.push('-');
            x = -x;
        }
        let int_part = x.hi.floor();
        let mut frac = x - Self::from_f64(int_part);
        // hi may round up across an integer boundary while lo is negative.
        let mut int_part = int_part;
        if frac.hi < 0.0 {
            int_part -= 1.0;
            frac += Self::ONE;
        }
        out.push_str(&format!("{}", int_part as u64));
        if digits > 0 {
            out.push('.');
            for _ in 0..digits {
                frac = frac.mul_f64(10.0);
                let mut d = frac.hi.floor();
                let mut rest = frac - Self::from_f64(d);
                if rest.hi < 0.0 {
                    d -= 1.0;
                    rest += Self::ONE;
                }
                let d = d.clamp(0.0, 9.0);
                out.push(char::from(b'0' + d as u8));
                frac = rest;
            }
        }
        out
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        f.write_str(&self.to_decimal_string(digits))
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from_f64(q3)
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}
