//! Zeros j_{n,k} of J_n.

use super::{bessel_deriv_j, bessel_j, Accuracy};
use crate::roots::{bisect, newton_polish, sign_changes};
use crate::{Error, Result};

/// First zero of the Airy function Ai.
pub const A1: f64 = -2.338107410459767;

const BETA_LO: f64 = -0.060804;
const BETA_HI: f64 = -0.000263;

/// Enclosure of j_{n,1} for n ≥ 10 from the two-sided Airy-type expansion
/// `n + |a₁|2^{-1/3}n^{1/3} + (3/20)a₁²2^{1/3}n^{-1/3} + β/n`.
pub fn lang_wong_window(n: u32) -> (f64, f64) {
    let nf = f64::from(n);
    let c = 2f64.cbrt();
    let base = nf + A1.abs() / c * nf.cbrt() + 0.15 * A1 * A1 * c / nf.cbrt();
    (base + BETA_LO / nf, base + BETA_HI / nf)
}

fn j_sign(n: u32, x: f64, acc: &Accuracy) -> Result<f64> {
    Ok(bessel_j(n, x, acc)?.value)
}

/// The `k`-th positive zero of `J_n`; `|J_n(result)| ≤ acc.target_abs_err`.
pub fn bessel_j_zero(n: u32, k: u32, acc: &Accuracy) -> Result<f64> {
    if k == 0 {
        return Err(Error::DomainError("zero index k must be ≥ 1".into()));
    }
    let mut bracket = None;
    if k == 1 && n >= 10 {
        let (lo, hi) = lang_wong_window(n);
        let pad = 1e-9 * hi;
        let (lo, hi) = (lo - pad, hi + pad);
        if j_sign(n, lo, acc)? > 0.0 && j_sign(n, hi, acc)? < 0.0 {
            bracket = Some((lo, hi));
        }
    }
    if bracket.is_none() && n <= 1 && k >= 2 {
        // McMahon: j_{n,k} ≈ β − (4n² − 1)/(8β), β = (k + n/2 − 1/4)π. Its error is
        // far below 0.2 here, and neighbouring zeros are about π apart.
        let nf = f64::from(n);
        let beta = (f64::from(k) + 0.5 * nf - 0.25) * std::f64::consts::PI;
        let guess = beta - (4.0 * nf * nf - 1.0) / (8.0 * beta);
        let (lo, hi) = (guess - 0.2, guess + 0.2);
        if j_sign(n, lo, acc)? * j_sign(n, hi, acc)? < 0.0 {
            bracket = Some((lo, hi));
        }
    }
    let (lo, hi) = match bracket {
        Some(b) => b,
        None => scan_bracket(n, k, acc)?,
    };
    let b = bisect(|x| j_sign(n, x, acc), lo, hi, 8.0 * f64::EPSILON * hi)?;
    let root = newton_polish(
        |x| Ok((bessel_j(n, x, acc)?.value, bessel_deriv_j(n, x, acc)?.value)),
        b.mid(),
        b.lo - 1e-12 * hi,
        b.hi + 1e-12 * hi,
        3,
    )?;
    let r = bessel_j(n, root, acc)?;
    if r.value.abs() > acc.target_abs_err {
        return Err(Error::NonConvergence { terms: 0, err: r.value.abs(), target: acc.target_abs_err });
    }
    Ok(root)
}

fn scan_bracket(n: u32, k: u32, acc: &Accuracy) -> Result<(f64, f64)> {
    let nf = f64::from(n);
    // J_n > 0 on (0, n] for n ≥ 1, and zeros are at least 2.4 apart.
    let start = if n == 0 { 0.5 } else { nf };
    let limit = (f64::from(k) + 0.5 * nf + 2.0) * std::f64::consts::PI + nf + 10.0;
    let mut found = 0;
    let mut a = start;
    while a < limit {
        let b = (a + 16.0).min(limit);
        for br in sign_changes(|x| j_sign(n, x, acc), a, b, 0.5)? {
            found += 1;
            if found == k {
                return Ok(br);
            }
        }
        a = b;
    }
    Err(Error::BracketFailure(format!("fewer than {k} zeros of J_{n} below {limit}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_zeros() {
        let acc = Accuracy::default();
        let j01 = bessel_j_zero(0, 1, &acc).unwrap();
        assert!((j01 - 2.404825557695773).abs() < 1e-12);
        assert!((bessel_j_zero(0, 3, &acc).unwrap() - 8.653727912911013).abs() < 1e-11);
    }

    #[test]
    fn window_contains_zero() {
        let acc = Accuracy::default();
        for n in [10, 57, 100, 400] {
            let (lo, hi) = lang_wong_window(n);
            let z = bessel_j_zero(n, 1, &acc).unwrap();
            assert!(lo < z && z < hi, "n = {n}: {lo} {z} {hi}");
        }
    }

    #[test]
    fn mcmahon_bracket_matches_scan() {
        let acc = Accuracy::default();
        for n in 0..=1 {
            for k in [2, 5, 17] {
                let fast = bessel_j_zero(n, k, &acc).unwrap();
                let (lo, hi) = scan_bracket(n, k, &acc).unwrap();
                assert!(lo <= fast && fast <= hi, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn rejects_k_zero() {
        assert!(bessel_j_zero(1, 0, &Accuracy::default()).is_err());
    }
}
