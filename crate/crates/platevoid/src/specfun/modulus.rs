//! Y_0, Y_1 and the modulus/phase pair (M_0, θ_0).

use super::hankel::hankel;
use super::{miller, Accuracy, BesselEval};
use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// (J_0, J_1, Y_0, Y_1) at x, each with an absolute error.
fn j_y_01(x: f64) -> Result<[BesselEval; 4]> {
    if x >= 25.0 {
        let h0 = hankel(0, x);
        let h1 = hankel(1, x);
        return Ok([
            BesselEval { value: h0.j, err: h0.err },
            BesselEval { value: h1.j, err: h1.err },
            BesselEval { value: h0.y, err: h0.err },
            BesselEval { value: h1.y, err: h1.err },
        ]);
    }
    // Neumann series over the full Miller sequence.
    let top = miller::start_order(x, false);
    let wanted: Vec<usize> = (0..top - 2).collect();
    let vals = miller::bessel_j_miller::<f64>(x, &wanted, 1_000_000, false)
        .ok_or(Error::NonConvergence { terms: top, err: f64::INFINITY, target: 0.0 })?;
    let j: Vec<f64> = vals.iter().map(|v| v.value.to_f64()).collect();
    let ej = vals
        .iter()
        .zip(&j)
        .map(|(v, jv)| v.rel_err * jv.abs() + v.abs_floor)
        .fold(0.0, f64::max);
    let l = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut harmonic = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s0 += sign * j[2 * k] / kf;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / kf;
        harmonic += 1.0 / kf;
        k += 1;
    }
    let y0 = 2.0 / PI * (l * j[0] - 2.0 * s0);
    let y1 = -2.0 / PI * (j[0] / x - l * j[1] - s1);
    let round = 16.0 * f64::EPSILON * (1.0 + l.abs());
    let ey = 2.0 / PI * ej * (l.abs() + 2.0 * harmonic + 1.0) + round;
    let jerr = |i: usize| vals[i].rel_err * j[i].abs() + vals[i].abs_floor;
    Ok([
        BesselEval { value: j[0], err: jerr(0) },
        BesselEval { value: j[1], err: jerr(1) },
        BesselEval { value: y0, err: ey },
        BesselEval { value: y1, err: ey },
    ])
}

fn check(x: f64, min: f64) -> Result<()> {
    if !x.is_finite() || x < min {
        return Err(Error::DomainError(format!("x = {x} must be ≥ {min}")));
    }
    Ok(())
}

/// Y_0(x) for x ≥ 1.
pub fn bessel_y0(x: f64, acc: &Accuracy) -> Result<BesselEval> {
    check(x, 1.0)?;
    let v = j_y_01(x)?[2];
    if v.err > acc.target_abs_err {
        return Err(Error::NonConvergence { terms: 0, err: v.err, target: acc.target_abs_err });
    }
    Ok(v)
}

/// Y_1(x) = −Y_0'(x) for x ≥ 1.
pub fn bessel_y1(x: f64, acc: &Accuracy) -> Result<BesselEval> {
    check(x, 1.0)?;
    let v = j_y_01(x)?[3];
    if v.err > acc.target_abs_err {
        return Err(Error::NonConvergence { terms: 0, err: v.err, target: acc.target_abs_err });
    }
    Ok(v)
}

/// `(M_0(x), θ_0(x))` with `J_0 = M_0 cos θ_0`, `Y_0 = M_0 sin θ_0`, θ_0 continuous
/// and asymptotic to `x − π/4`. Requires x ≥ 10.
pub fn modulus_phase_0(x: f64, acc: &Accuracy) -> Result<(f64, f64)> {
    check(x, 10.0)?;
    let [j0, _, y0, _] = j_y_01(x)?;
    let err = j0.err + y0.err;
    if err > acc.target_abs_err {
        return Err(Error::NonConvergence { terms: 0, err, target: acc.target_abs_err });
    }
    let m0 = j0.value.hypot(y0.value);
    let raw = y0.value.atan2(j0.value);
    // θ_0 = x − π/4 − 1/(8x) + O(x^-3); pick the branch nearest to that.
    let guess = x - FRAC_PI_4 - 0.125 / x;
    let turns = ((guess - raw) / (2.0 * PI)).round();
    let theta = raw + 2.0 * PI * turns;
    debug_assert!((theta - guess).abs() < FRAC_PI_2);
    Ok((m0, theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_reference_values() {
        let acc = Accuracy::default();
        assert!((bessel_y0(10.0, &acc).unwrap().value - 0.055671167283599395).abs() < 1e-13);
        assert!((bessel_y1(10.0, &acc).unwrap().value - 0.24901542420695388).abs() < 1e-13);
        // continuity across the method switch at 25
        let a = bessel_y0(25.0 - 1e-9, &acc).unwrap().value;
        let b = bessel_y0(25.0, &acc).unwrap().value;
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn phase_window() {
        let acc = Accuracy::default();
        for x in [10.0, 13.7, 20.0, 50.0, 1000.0] {
            let (m, t) = modulus_phase_0(x, &acc).unwrap();
            assert!(x - FRAC_PI_4 - 1.01 / (8.0 * x) < t && t < x - FRAC_PI_4, "x = {x}");
            assert!(m * m < 2.0 / (PI * x));
        }
        assert!(modulus_phase_0(9.0, &acc).is_err());
    }
}
