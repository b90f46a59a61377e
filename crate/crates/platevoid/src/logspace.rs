//! Signed log-magnitude numbers for quantities far outside the f64 range.

use serde::{Deserialize, Serialize};
use std::ops::{Div, Mul, Neg};

/// A real number stored as `sign * exp(ln)`. Zero is `sign == 0`, `ln == -inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedLog {
    pub sign: i8,
    pub ln: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0, ln: f64::NEG_INFINITY };
    pub const ONE: SignedLog = SignedLog { sign: 1, ln: 0.0 };

    pub fn new(sign: i8, ln: f64) -> Self {
        if sign == 0 || ln == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLog { sign: sign.signum(), ln }
        }
    }

    /// Positive number with the given logarithm.
    pub fn from_ln(ln: f64) -> Self {
        Self::new(1, ln)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog { sign: if x > 0.0 { 1 } else { -1 }, ln: x.abs().ln() }
        }
    }

    /// Underflows to zero and overflows to infinity like ordinary arithmetic.
    pub fn to_f64(self) -> f64 {
        f64::from(self.sign) * self.ln.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        if self.sign == 0 {
            self
        } else {
            SignedLog { sign: 1, ln: self.ln }
        }
    }

    pub fn add(self, other: Self) -> Self {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln >= other.ln { (self, other) } else { (other, self) };
        let ratio = (small.ln - big.ln).exp();
        if big.sign == small.sign {
            SignedLog::new(big.sign, big.ln + ratio.ln_1p())
        } else if ratio == 1.0 {
            Self::ZERO
        } else {
            SignedLog::new(big.sign, big.ln + (-ratio).ln_1p())
        }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(-other)
    }

    /// Sum of many terms, rescaled by the largest magnitude.
    pub fn sum<I: IntoIterator<Item = SignedLog>>(terms: I) -> Self {
        let terms: Vec<SignedLog> = terms.into_iter().filter(|t| t.sign != 0).collect();
        let Some(top) = terms.iter().map(|t| t.ln).reduce(f64::max) else {
            return Self::ZERO;
        };
        let s: f64 = terms.iter().map(|t| f64::from(t.sign) * (t.ln - top).exp()).sum();
        SignedLog::from_f64(s).mul(SignedLog::from_ln(top))
    }

    pub fn mul(self, other: Self) -> Self {
        SignedLog::new(self.sign * other.sign, self.ln + other.ln)
    }

    pub fn div(self, other: Self) -> Self {
        assert!(other.sign != 0, "division by zero in log space");
        SignedLog::new(self.sign * other.sign, self.ln - other.ln)
    }

    pub fn powi(self, k: i32) -> Self {
        let sign = if k % 2 == 0 { self.sign.abs() } else { self.sign };
        SignedLog::new(sign, self.ln * f64::from(k))
    }

    /// `self > other` on the real line.
    pub fn gt(self, other: Self) -> bool {
        let d = self.sub(other);
        d.sign > 0
    }
}

impl Neg for SignedLog {
    type Output = SignedLog;
    fn neg(self) -> SignedLog {
        SignedLog { sign: -self.sign, ln: self.ln }
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        SignedLog::mul(self, rhs)
    }
}

impl Div for SignedLog {
    type Output = SignedLog;
    fn div(self, rhs: SignedLog) -> SignedLog {
        SignedLog::div(self, rhs)
    }
}

/// `ln(exp(a) + exp(b))` without overflow.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(exp(a) - exp(b))` for `a > b`; `NaN` otherwise.
pub fn ln_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if b >= a {
        return f64::NAN;
    }
    a + (-(b - a).exp()).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_arithmetic() {
        let a = SignedLog::from_f64(-3.0);
        let b = SignedLog::from_f64(5.0);
        assert!((a.add(b).to_f64() - 2.0).abs() < 1e-14);
        assert!((a.mul(b).to_f64() + 15.0).abs() < 1e-13);
        assert!((b.div(a).to_f64() + 5.0 / 3.0).abs() < 1e-15);
        assert!(a.add(-a).is_zero());
        assert!(b.gt(a));
    }

    #[test]
    fn tiny_magnitudes_survive() {
        let t = SignedLog::from_ln(-2000.0);
        let u = SignedLog::from_ln(-2001.0);
        let s = t.sub(u);
        assert!((s.ln - (-2000.0 + (1.0 - (-1.0f64).exp()).ln())).abs() < 1e-12);
        assert_eq!(t.to_f64(), 0.0);
    }

    #[test]
    fn sum_matches_direct() {
        let xs = [1.5, -0.25, 7.0, -3.0];
        let s = SignedLog::sum(xs.iter().map(|&x| SignedLog::from_f64(x)));
        assert!((s.to_f64() - 5.25).abs() < 1e-14);
        assert!(SignedLog::sum(std::iter::empty()).is_zero());
    }

    #[test]
    fn ln_add_sub() {
        assert!((ln_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert!((ln_sub_exp(2f64.ln(), 0.0)).abs() < 1e-15);
        assert!(ln_sub_exp(0.0, 1.0).is_nan());
    }
}
