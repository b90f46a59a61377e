//! Bracketed root finding.

use crate::{Error, Result};

/// Result of a bisection: the final bracket `[lo, hi]` still contains the sign change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

impl Bracket {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Bisect `f` on `[a, b]` until the bracket is narrower than `xtol`.
///
/// Only signs of `f` are used, so this is safe near poles on the far side of a root.
pub fn bisect<F>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(Bracket { lo, hi: lo, iterations: 0 });
    }
    if fhi == 0.0 {
        return Ok(Bracket { lo: hi, hi, iterations: 0 });
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::BracketFailure(format!(
            "f({lo}) = {flo:e} and f({hi}) = {fhi:e} have the same sign"
        )));
    }
    let lo_positive = flo > 0.0;
    let mut iterations = 0;
    while hi - lo > xtol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        iterations += 1;
        if fm == 0.0 {
            return Ok(Bracket { lo: mid, hi: mid, iterations });
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bracket { lo, hi, iterations })
}

/// Newton steps from `x0`, kept inside `[lo, hi]`; falls back to `x0` if a step leaves it.
pub fn newton_polish<F>(mut fdf: F, x0: f64, lo: f64, hi: f64, steps: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut x = x0;
    for _ in 0..steps {
        let (fx, dfx) = fdf(x)?;
        if fx == 0.0 || dfx == 0.0 || !dfx.is_finite() {
            break;
        }
        let next = x - fx / dfx;
        if !(lo..=hi).contains(&next) {
            return Ok(x0);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
            x = next;
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Scan `[a, b]` in steps of `h` and return every sub-interval where `f` changes sign.
pub fn sign_changes<F>(mut f: F, a: f64, b: f64, h: f64) -> Result<Vec<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut out = Vec::new();
    let steps = ((b - a) / h).ceil().max(1.0) as usize;
    let mut x0 = a;
    let mut f0 = f(x0)?;
    for i in 1..=steps {
        let x1 = if i == steps { b } else { a + h * i as f64 };
        let f1 = f(x1)?;
        if f0 == 0.0 || f0.signum() != f1.signum() {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(out)
}
