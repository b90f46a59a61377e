//! Miller backward recurrence for J_n, normalised by `J_0 + 2 Σ J_{2k} = 1`.

use super::real::{Real, Scaled, RESCALE_AT, RESCALE_BITS};

pub(crate) struct MillerValue<R> {
    pub value: Scaled<R>,
    /// Relative error estimate (truncation + rounding).
    pub rel_err: f64,
    /// Additional absolute error for orders inside the oscillatory range (`n < x`).
    pub abs_floor: f64,
}

struct Run<R> {
    values: Vec<Scaled<R>>,
    cond: f64,
    fmax_rel: f64,
}

/// One backward sweep from order `start`; `wanted` must be sorted ascending and below `start`.
fn sweep<R: Real>(x: f64, start: usize, wanted: &[usize]) -> Run<R> {
    let xr = R::of(x);
    let mut next = R::of(0.0);
    let mut cur = R::of(1.0);
    let mut exp: i64 = 0;
    let mut s = R::of(0.0);
    let mut abs_s = 0.0f64;
    let mut fmax = 0.0f64;
    let mut saved: Vec<(R, i64)> = vec![(R::of(0.0), 0); wanted.len()];
    let mut w = wanted.len();
    let mut m = start;
    loop {
        while w > 0 && wanted[w - 1] == m {
            saved[w - 1] = (cur, exp);
            w -= 1;
        }
        if m % 2 == 0 {
            let term = if m == 0 { cur } else { cur * R::of(2.0) };
            s = s + term;
            abs_s += term.hi().abs();
        }
        fmax = fmax.max(cur.hi().abs());
        if m == 0 {
            break;
        }
        let prev = R::of(2.0 * m as f64) / xr * cur - next;
        next = cur;
        cur = prev;
        m -= 1;
        if cur.hi().abs() > RESCALE_AT {
            cur = cur.scale2(-RESCALE_BITS);
            next = next.scale2(-RESCALE_BITS);
            s = s.scale2(-RESCALE_BITS);
            abs_s *= 2f64.powi(-RESCALE_BITS);
            fmax *= 2f64.powi(-RESCALE_BITS);
            exp += i64::from(RESCALE_BITS);
        }
    }
    let values = saved
        .into_iter()
        .map(|(f, e)| Scaled { m: f / s, e: e - exp }.normalize())
        .collect();
    let sabs = s.hi().abs();
    Run { values, cond: abs_s / sabs, fmax_rel: fmax / sabs }
}

/// Starting order for the sweep. `c1 T^{1/3} + c2` orders beyond the turning point
/// puts the starting value deep in the Airy decay region.
pub(crate) fn start_order(top: f64, extended: bool) -> usize {
    let (c1, c2) = if extended { (22.0, 70.0) } else { (12.0, 30.0) };
    let t = top.max(1.0);
    let m = (t + c1 * t.cbrt() + c2).ceil() as usize;
    m + (m % 2)
}

/// J_m(x) for every `m` in `wanted` (ascending), from two sweeps whose difference
/// estimates the truncation error. Returns `None` if the sweep would exceed `max_terms`.
pub(crate) fn bessel_j_miller<R: Real>(x: f64, wanted: &[usize], max_terms: usize, extended: bool) -> Option<Vec<MillerValue<R>>> {
    debug_assert!(wanted.windows(2).all(|p| p[0] <= p[1]));
    let top = wanted.last().copied().unwrap_or(0) as f64;
    let t = top.max(x);
    let m1 = start_order(t, extended);
    let extra = (6.0 * t.max(1.0).cbrt() + 20.0) as usize;
    let m2 = m1 + extra + extra % 2;
    if m2 > max_terms {
        return None;
    }
    let a = sweep::<R>(x, m1, wanted);
    let b = sweep::<R>(x, m2, wanted);
    // Worst-case linear growth: each step adds a few roundings that need not cancel.
    let round = 8.0 * R::UNIT * (m2 as f64 + 4.0);
    let out = a
        .values
        .iter()
        .zip(b.values)
        .zip(wanted)
        .map(|((va, vb), &order)| {
            let trunc = if vb.sign() == 0 {
                0.0
            } else {
                let ratio = va.div(vb);
                (ratio.m.scale2(ratio.e.clamp(-1000, 1000) as i32).hi() - 1.0).abs()
            };
            let abs_floor = if (order as f64) < x { round * b.fmax_rel } else { 0.0 };
            MillerValue { value: vb, rel_err: trunc + round * b.cond, abs_floor }
        })
        .collect();
    Some(out)
}

/// Modified Bessel values `I_m(x)` as `(ln I_m, rel_err)`, by backward recurrence
/// normalised with `I_0 + 2 Σ I_k = e^x`. Independent of the ascending series.
pub(crate) fn log_bessel_i_miller<R: Real>(x: f64, wanted: &[usize], max_terms: usize, extended: bool) -> Option<Vec<(f64, f64)>> {
    let top = wanted.last().copied().unwrap_or(0);
    let (c1, c2) = if extended { (20.0, 80.0) } else { (14.0, 40.0) };
    let m1 = top + (c1 * x.sqrt() + c2).ceil() as usize;
    let m2 = m1 + (4.0 * x.sqrt() + 20.0).ceil() as usize;
    if m2 > max_terms {
        return None;
    }
    let a = sweep_i::<R>(x, m1, wanted);
    let b = sweep_i::<R>(x, m2, wanted);
    let round = 4.0 * R::UNIT * (m2 as f64 + 4.0);
    Some(a.iter().zip(&b).map(|(la, lb)| (*lb, (la - lb).abs() + round)).collect())
}

fn sweep_i<R: Real>(x: f64, start: usize, wanted: &[usize]) -> Vec<f64> {
    let xr = R::of(x);
    let mut next = R::of(0.0);
    let mut cur = R::of(1.0);
    let mut exp: i64 = 0;
    let mut s = R::of(0.0);
    let mut saved: Vec<(R, i64)> = vec![(R::of(0.0), 0); wanted.len()];
    let mut w = wanted.len();
    let mut m = start;
    loop {
        while w > 0 && wanted[w - 1] == m {
            saved[w - 1] = (cur, exp);
            w -= 1;
        }
        s = s + if m == 0 { cur } else { cur * R::of(2.0) };
        if m == 0 {
            break;
        }
        let prev = R::of(2.0 * m as f64) / xr * cur + next;
        next = cur;
        cur = prev;
        m -= 1;
        if cur.hi().abs() > RESCALE_AT {
            cur = cur.scale2(-RESCALE_BITS);
            next = next.scale2(-RESCALE_BITS);
            s = s.scale2(-RESCALE_BITS);
            exp += i64::from(RESCALE_BITS);
        }
    }
    let ln2 = std::f64::consts::LN_2;
    saved
        .into_iter()
        .map(|(f, e)| (f / s).ln_abs() + (e - exp) as f64 * ln2 + x)
        .collect()
}
