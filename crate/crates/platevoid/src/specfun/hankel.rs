//! Hankel large-argument expansions for orders 0 and 1.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// J_ν(x) and Y_ν(x) for ν ∈ {0, 1}, each with an absolute error bound.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HankelOut {
    pub j: f64,
    pub y: f64,
    pub err: f64,
}

/// Valid for x ≥ 25, where the smallest term of the divergent series is below 1e−20.
pub(crate) fn hankel(nu: u32, x: f64) -> HankelOut {
    debug_assert!(nu <= 1 && x >= 20.0);
    let mu = 4.0 * f64::from(nu * nu);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k(ν) / x^k
    let mut last = 1.0f64;
    let mut omitted = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = a * (mu - odd * odd) / (kf * 8.0 * x);
        if next.abs() > last {
            omitted = next.abs();
            break;
        }
        a = next;
        last = a.abs();
        // Signs: P = a0 - a2 + a4 - ..., Q = a1 - a3 + ...
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if last < 1e-18 * p.abs() {
            omitted = last;
            break;
        }
    }
    let (s, c) = x.sin_cos();
    let (cos_chi, sin_chi) = if nu == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, (-s - c) * FRAC_1_SQRT_2)
    };
    let amp = (2.0 / (PI * x)).sqrt();
    let j = amp * (p * cos_chi - q * sin_chi);
    let y = amp * (p * sin_chi + q * cos_chi);
    let err = amp * (2.0 * omitted + 8.0 * f64::EPSILON * (p.abs() + q.abs()));
    HankelOut { j, y, err }
}
