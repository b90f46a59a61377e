//! Minimal arithmetic interface shared by the double and double-double code paths.

use std::ops::{Add, Div, Mul, Neg, Sub};
use super::dd::Dd;

pub trait Real:
    Copy
    + Send
    + Sync
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Unit roundoff of the representation.
    const UNIT: f64;
    fn of(x: f64) -> Self;
    fn hi(self) -> f64;
    fn abs(self) -> Self;
    /// `ln|self|` rounded to f64.
    fn ln_abs(self) -> f64;
    /// Exact multiplication by `2^e`.
    fn scale2(self, e: i32) -> Self;
}

impl Real for f64 {
    const UNIT: f64 = f64::EPSILON / 2.0;
    fn of(x: f64) -> Self {
        x
    }
    fn hi(self) -> f64 {
        self
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn ln_abs(self) -> f64 {
        f64::abs(self).ln()
    }
    fn scale2(self, e: i32) -> Self {
        self * 2f64.powi(e)
    }
}

impl Real for Dd {
    // 2^-104: the pair carries roughly 31 significant digits.
    const UNIT: f64 = 4.930380657631324e-32;
    fn of(x: f64) -> Self {
        Dd::from_f64(x)
    }
    fn hi(self) -> f64 {
        self.hi
    }
    fn abs(self) -> Self {
        Dd::abs(self)
    }
    fn ln_abs(self) -> f64 {
        self.hi.abs().ln() + self.lo / self.hi
    }
    fn scale2(self, e: i32) -> Self {
        let f = 2f64.powi(e);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }
}

/// `m * 2^e` with an unbounded binary exponent.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<R> {
    pub m: R,
    pub e: i64,
}

pub(crate) const RESCALE_BITS: i32 = 600;
pub(crate) const RESCALE_AT: f64 = 4.149515568880993e180; // 2^600

impl<R: Real> Scaled<R> {
    pub fn new(m: R) -> Self {
        Scaled { m, e: 0 }
    }

    pub fn ln_abs(&self) -> f64 {
        self.m.ln_abs() + self.e as f64 * std::f64::consts::LN_2
    }

    pub fn sign(&self) -> i8 {
        let h = self.m.hi();
        if h > 0.0 {
            1
        } else if h < 0.0 {
            -1
        } else {
            0
        }
    }

    /// Nearest f64; underflows to zero and overflows to infinity.
    pub fn to_f64(&self) -> f64 {
        if self.sign() == 0 {
            return 0.0;
        }
        let l = self.ln_abs();
        if l > 709.5 {
            return f64::from(self.sign()) * f64::INFINITY;
        }
        if self.e.abs() < 1000 {
            let v = self.m.scale2(self.e as i32).hi();
            if v != 0.0 && v.is_finite() {
                return v;
            }
        }
        f64::from(self.sign()) * l.exp()
    }

    pub fn normalize(mut self) -> Self {
        if !self.m.hi().is_finite() {
            return self;
        }
        while self.m.hi().abs() > RESCALE_AT {
            self.m = self.m.scale2(-RESCALE_BITS);
            self.e += i64::from(RESCALE_BITS);
        }
        while self.m.hi() != 0.0 && self.m.hi().abs() < 1.0 / RESCALE_AT {
            self.m = self.m.scale2(RESCALE_BITS);
            self.e -= i64::from(RESCALE_BITS);
        }
        self
    }

    /// Same value with the mantissa's leading exponent moved into `e`, so that
    /// products and quotients of two mantissas cannot overflow.
    fn unit(self) -> Self {
        let h = self.m.hi().abs();
        if h == 0.0 || !h.is_finite() {
            return self;
        }
        let k = h.log2().floor() as i32;
        // Two steps keep each factor 2^(-k/2) a normal number.
        let m = self.m.scale2(-(k / 2)).scale2(-(k - k / 2));
        Scaled { m, e: self.e + i64::from(k) }
    }

    pub fn mul(self, o: Self) -> Self {
        let (a, b) = (self.unit(), o.unit());
        Scaled { m: a.m * b.m, e: a.e + b.e }.normalize()
    }

    pub fn div(self, o: Self) -> Self {
        let (a, b) = (self.unit(), o.unit());
        Scaled { m: a.m / b.m, e: a.e - b.e }.normalize()
    }
}
