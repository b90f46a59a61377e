//! Ascending power series for J_n and I_n.

use super::real::{Real, Scaled, RESCALE_AT, RESCALE_BITS};

/// A series value together with the scale against which its rounding error is measured.
///
/// The absolute error is `err_rel * |scale|`; for positive series `scale == value`,
/// for alternating ones `scale` is the sum of absolute values of the terms.
pub(crate) struct SeriesOut<R> {
    pub value: Scaled<R>,
    pub scale: Scaled<R>,
    pub err_rel: f64,
    pub terms: usize,
}

/// `(x/2)^n / n!` as a scaled product.
pub(crate) fn prefactor<R: Real>(n: u32, x: f64) -> Scaled<R> {
    let half = R::of(x) * R::of(0.5);
    let mut p = Scaled::new(R::of(1.0));
    for j in 1..=n {
        p.m = p.m * half / R::of(f64::from(j));
        if j % 8 == 0 {
            p = p.normalize();
        }
    }
    p.normalize()
}

/// `Σ_k s^k (x/2)^{2k} / (k! (n+k)!)` times the prefactor, with `s = -1` for J and `+1` for I.
///
/// Returns `None` when `max_terms` is exhausted before the tail is negligible.
pub(crate) fn bessel_series<R: Real>(n: u32, x: f64, alternating: bool, max_terms: usize) -> Option<SeriesOut<R>> {
    let pref = prefactor::<R>(n, x);
    let half = R::of(x) * R::of(0.5);
    let q = half * half;
    let qf = q.hi();
    let nf = f64::from(n);
    let mut t = R::of(1.0);
    let mut sum = R::of(1.0);
    let mut abs = R::of(1.0);
    let mut shift: i64 = 0;
    let mut k = 0usize;
    let tail;
    loop {
        k += 1;
        if k > max_terms {
            return None;
        }
        let kf = k as f64;
        let denom = R::of(kf) * R::of(nf + kf);
        t = t * q / denom;
        if alternating {
            t = -t;
        }
        sum = sum + t;
        abs = abs + t.abs();
        if abs.hi() > RESCALE_AT {
            t = t.scale2(-RESCALE_BITS);
            sum = sum.scale2(-RESCALE_BITS);
            abs = abs.scale2(-RESCALE_BITS);
            shift += i64::from(RESCALE_BITS);
        }
        let decreasing = kf * (nf + kf) > qf;
        if decreasing && t.abs().hi() <= R::UNIT * 0.25 * abs.hi() {
            let ratio = qf / ((kf + 1.0) * (nf + kf + 1.0));
            let next = t.abs().hi() * ratio;
            // Alternating: bounded by the next term. Positive: geometric bound.
            tail = if alternating { next } else { next / (1.0 - ratio) };
            break;
        }
    }
    let value = pref.mul(Scaled { m: sum, e: shift });
    let scale = pref.mul(Scaled { m: abs, e: shift });
    let rounding = R::UNIT * (f64::from(n) + 2.0 * k as f64 + 6.0);
    let err_rel = rounding + tail / abs.hi();
    Some(SeriesOut { value, scale, err_rel, terms: k })
}
