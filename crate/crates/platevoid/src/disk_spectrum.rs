//! Clamped-plate eigenvalues of the unit disk and the nondegeneracy checklist.
//!
//! The angular-momentum-`n` eigenvalues are `ξ⁴` where `ξ` is a positive zero of
//! the cross-ratio `W_n(x) = J_n'/J_n − I_n'/I_n`. Every zero is located in an
//! interlacing bracket `(j_{n,k}, j_{n+1,k})` and found by bisection on the
//! pole-free product `J_n(x) I_n(x) W_n(x) / I_n(x)`.

use crate::roots::bisect;
use crate::specfun::{bessel_i_ratio, bessel_j, bessel_j_pair, bessel_j_zero, log_abs_bessel_j_orders, Accuracy, BesselEval};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative uncertainty of `J_n(x)` above which `x` is treated as a pole of `W_n`.
const POLE_REL: f64 = 1e-3;

/// Half-width of the window around `ξ_{N,1}` in which radial eigenvalues are
/// computed one by one; beyond it the gap follows from `ξ⁴ − (ξ − 10)⁴`.
pub const RADIAL_WINDOW: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateMode {
    #[serde(rename = "N")]
    pub n: u32,
    pub k: u32,
    pub xi: f64,
    pub lambda: f64,
    pub plate_eig: f64,
}

impl PlateMode {
    fn new(n: u32, k: u32, xi: f64) -> Self {
        PlateMode { n, k, xi, lambda: xi * xi, plate_eig: xi.powi(4) }
    }

    /// `√λ`, i.e. `ξ`.
    pub fn sqrt_lambda(&self) -> f64 {
        self.xi
    }
}

fn no_budget(acc: &Accuracy) -> Accuracy {
    acc.with_target(f64::MAX)
}

/// `W_n(x) = −J_{n+1}(x)/J_n(x) − I_{n+1}(x)/I_n(x)`, with a propagated error.
///
/// The J ratio is taken in log form so that deep-underflow arguments work.
pub fn cross_ratio_w(n: u32, x: f64, acc: &Accuracy) -> Result<BesselEval> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DomainError(format!("W_n needs x > 0, got {x}")));
    }
    let loose = no_budget(acc);
    let js = match log_abs_bessel_j_orders(&[n, n + 1], x, &loose) {
        Ok(v) => v,
        Err(Error::NonConvergence { .. }) => return Err(Error::PoleProximity { n, x, threshold: f64::NAN }),
        Err(e) => return Err(e),
    };
    if js[0].sign == 0 || js[0].err > POLE_REL {
        let threshold = if js[0].err.is_finite() { js[0].ln.exp() * js[0].err / POLE_REL } else { f64::NAN };
        return Err(Error::PoleProximity { n, x, threshold });
    }
    let jr = f64::from(js[0].sign * js[1].sign) * (js[1].ln - js[0].ln).exp();
    let ir = bessel_i_ratio(n, x, &loose)?;
    let value = -jr - ir.value;
    let err = jr.abs() * (js[0].err + js[1].err) * 1.01 + ir.err + 4.0 * f64::EPSILON * (jr.abs() + ir.value);
    if err > acc.target_abs_err * value.abs().max(1.0) {
        return Err(Error::NonConvergence { terms: 0, err, target: acc.target_abs_err });
    }
    Ok(BesselEval { value, err })
}

/// `W_n` through the lowering recurrences `J_n' = J_{n−1} − (n/x)J_n` and
/// `I_n' = I_{n−1} − (n/x)I_n`. Agrees with [`cross_ratio_w`] for `n ≥ 1`; kept
/// as an independent second form.
pub fn cross_ratio_w_lowering(n: u32, x: f64, acc: &Accuracy) -> Result<BesselEval> {
    if n == 0 {
        return cross_ratio_w(0, x, acc);
    }
    let loose = no_budget(acc);
    let js = log_abs_bessel_j_orders(&[n - 1, n], x, &loose)?;
    if js[1].sign == 0 || js[1].err > POLE_REL {
        return Err(Error::PoleProximity { n, x, threshold: f64::NAN });
    }
    let jr = f64::from(js[0].sign * js[1].sign) * (js[0].ln - js[1].ln).exp();
    // I_{n−1}/I_n = 1 / (I_n/I_{n−1})
    let ir = bessel_i_ratio(n - 1, x, &loose)?;
    let inv = 1.0 / ir.value;
    // (J_{n−1}/J_n − n/x) − (I_{n−1}/I_n − n/x): the n/x terms cancel exactly.
    let value = jr - inv;
    let err = jr.abs() * (js[0].err + js[1].err) * 1.01 + inv * inv * ir.err + 4.0 * f64::EPSILON * (jr.abs() + inv);
    if err > acc.target_abs_err * value.abs().max(1.0) {
        return Err(Error::NonConvergence { terms: 0, err, target: acc.target_abs_err });
    }
    Ok(BesselEval { value, err })
}

/// `−J_{n+1}(x) − J_n(x)·I_{n+1}(x)/I_n(x) = J_n(x) W_n(x)`: same zeros as `W_n`
/// away from the poles, and finite everywhere.
fn pole_free(n: u32, x: f64, acc: &Accuracy) -> Result<f64> {
    let (a, b) = bessel_j_pair(n, x, acc)?;
    let ir = bessel_i_ratio(n, x, &no_budget(acc))?;
    Ok(-b.value - a.value * ir.value)
}

/// The `k`-th positive zero of `W_n`, which lies in `(j_{n,k}, j_{n+1,k})`.
///
/// The bracket is shrunk by ten times the zero solver's tolerance on each side
/// before bisecting.
pub fn plate_mode(n: u32, k: u32, acc: &Accuracy) -> Result<PlateMode> {
    let lo = bessel_j_zero(n, k, acc)?;
    let hi = bessel_j_zero(n + 1, k, acc)?;
    let shrink = 10.0 * zero_tolerance(hi);
    let (a, b) = (lo + shrink, hi - shrink);
    if !(a < b) {
        return Err(Error::BracketFailure(format!("empty bracket ({lo}, {hi}) for ξ_{{{n},{k}}}")));
    }
    let br = bisect(|x| pole_free(n, x, acc), a, b, 4.0 * f64::EPSILON * b)?;
    Ok(PlateMode::new(n, k, br.mid()))
}

/// Width below which the Bessel zero solver stops bisecting near `x`.
pub fn zero_tolerance(x: f64) -> f64 {
    8.0 * f64::EPSILON * x
}

/// `ξ_{N,1}`.
pub fn first_mode(n: u32, acc: &Accuracy) -> Result<PlateMode> {
    if n == 0 {
        return Err(Error::DomainError("first_mode needs N ≥ 1; use radial_modes for N = 0".into()));
    }
    plate_mode(n, 1, acc)
}

/// The first `count` radially symmetric modes `ξ_{0,1} < ξ_{0,2} < …`.
pub fn radial_modes(count: u32, acc: &Accuracy) -> Result<Vec<PlateMode>> {
    if count == 0 {
        return Err(Error::DomainError("count must be ≥ 1".into()));
    }
    (1..=count).map(|k| plate_mode(0, k, acc)).collect()
}

/// Radial modes with `ξ_{0,k}` in `(x − half_width, x + half_width)`.
///
/// `ξ_{0,k}` lies in `(j_{0,k}, j_{1,k}) ⊂ ((k − 1/4)π − 0.1, (k + 1/4)π + 0.1)`,
/// so only indices near `x/π` need solving.
pub fn radial_modes_near(x: f64, half_width: f64, acc: &Accuracy) -> Result<Vec<PlateMode>> {
    let k_lo = (((x - half_width) / PI - 0.5).floor()).max(1.0) as u32;
    let k_hi = ((x + half_width) / PI + 0.5).ceil() as u32;
    let mut out = Vec::new();
    for k in k_lo..=k_hi {
        let m = plate_mode(0, k, acc)?;
        if (m.xi - x).abs() < half_width {
            out.push(m);
        }
    }
    Ok(out)
}

/// Flags of the five nondegeneracy conditions plus extra diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyChecks {
    /// Distance to every radial eigenvalue `ξ_{0,j}` at least 1.
    pub distance: bool,
    /// `W_0(ξ) ∈ [−6, −1]`.
    pub w0_window: bool,
    /// `ξ^{-1/2}/10 ≤ J_0(ξ) ≤ √(2/π) ξ^{-1/2}`.
    pub j0_window: bool,
    /// `N + N^{1/3} < ξ < N + 3N^{1/3}`.
    pub xi_window: bool,
    /// Spectral gap at least `4N³`.
    pub gap: bool,
    /// Informational: `W_0(ξ) ∈ [−5.36, −1.21]`.
    pub w0_fine_window: bool,
    /// Informational: `N + 1.85N^{1/3} < ξ < N + 2.13N^{1/3}`.
    pub xi_simple_window: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyMargins {
    pub distance: f64,
    pub w0_lower: f64,
    pub w0_upper: f64,
    pub j0_lower: f64,
    pub j0_upper: f64,
    pub xi_lower: f64,
    pub xi_upper: f64,
    /// `gap / (4N³)`; passes when ≥ 1.
    pub gap_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyCertificate {
    #[serde(rename = "N")]
    pub n: u32,
    pub xi1: f64,
    pub dist_to_radial_zeros: f64,
    pub w0_at_xi: f64,
    pub j0_at_xi: f64,
    /// `τ`: distance from `ξ⁴` to the rest of the `D_N`-invariant spectrum.
    pub gap: f64,
    pub passed: bool,
    pub checks: NondegeneracyChecks,
    pub margins: NondegeneracyMargins,
    /// `(j_{N,1}, j_{N+1,1})`.
    pub bracket: (f64, f64),
    pub nearby_radial: Vec<f64>,
    /// `ξ_{N,2}`, the next mode with the same angular momentum.
    pub xi2: f64,
    /// How each part of the spectrum bounds the gap.
    pub gap_radial_near: f64,
    pub gap_radial_tail: f64,
    pub gap_same_n: f64,
    pub gap_higher_harmonics: f64,
}

impl NondegeneracyCertificate {
    pub fn mode(&self) -> PlateMode {
        PlateMode::new(self.n, 1, self.xi1)
    }

    /// Names of the failed conditions, in checklist order.
    pub fn failed_checks(&self) -> Vec<&'static str> {
        let c = &self.checks;
        [
            (c.distance, "distance to radial eigenvalues ≥ 1"),
            (c.w0_window, "W_0(ξ) ∈ [−6, −1]"),
            (c.j0_window, "ξ^(−1/2)/10 ≤ J_0(ξ) ≤ √(2/π)ξ^(−1/2)"),
            (c.xi_window, "N + N^(1/3) < ξ < N + 3N^(1/3)"),
            (c.gap, "spectral gap ≥ 4N³"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

/// Evaluate the nondegeneracy checklist for `N ≥ 100`.
pub fn certify_nondegenerate(n: u32, acc: &Accuracy) -> Result<NondegeneracyCertificate> {
    if n < 100 {
        return Err(Error::DomainError(format!("nondegeneracy certificate needs N ≥ 100, got {n}")));
    }
    let nf = f64::from(n);
    let c = nf.cbrt();
    let mode = first_mode(n, acc)?;
    let xi = mode.xi;
    let bracket = (bessel_j_zero(n, 1, acc)?, bessel_j_zero(n + 1, 1, acc)?);

    let near = radial_modes_near(xi, RADIAL_WINDOW, acc)?;
    let dist = near.iter().map(|m| (m.xi - xi).abs()).fold(f64::INFINITY, f64::min);
    let x4 = xi.powi(4);
    let gap_radial_near = near.iter().map(|m| (m.plate_eig - x4).abs()).fold(f64::INFINITY, f64::min);
    let gap_radial_tail = x4 - (xi - RADIAL_WINDOW).powi(4);

    // Same angular momentum: ξ_{N,j} ≥ ξ_{N,2} for j ≥ 2.
    let xi2 = plate_mode(n, 2, acc)?.xi;
    let gap_same_n = xi2.powi(4) - x4;
    // Harmonics kN with k ≥ 2: ξ_{kN,j} > j_{kN,1} > kN ≥ 2N.
    let gap_higher_harmonics = (2.0 * nf).powi(4) - x4;
    let gap = gap_radial_near.min(gap_radial_tail).min(gap_same_n).min(gap_higher_harmonics);

    let w0 = cross_ratio_w(0, xi, acc)?.value;
    let j0 = bessel_j(0, xi, acc)?.value;
    let j0_lo = 0.1 / xi.sqrt();
    let j0_hi = (2.0 / PI).sqrt() / xi.sqrt();
    let margins = NondegeneracyMargins {
        distance: dist - 1.0,
        w0_lower: w0 + 6.0,
        w0_upper: -1.0 - w0,
        j0_lower: j0 - j0_lo,
        j0_upper: j0_hi - j0,
        xi_lower: xi - (nf + c),
        xi_upper: nf + 3.0 * c - xi,
        gap_ratio: gap / (4.0 * nf.powi(3)),
    };
    let checks = NondegeneracyChecks {
        distance: margins.distance >= 0.0,
        w0_window: margins.w0_lower >= 0.0 && margins.w0_upper >= 0.0,
        j0_window: margins.j0_lower >= 0.0 && margins.j0_upper >= 0.0,
        xi_window: margins.xi_lower > 0.0 && margins.xi_upper > 0.0,
        gap: margins.gap_ratio >= 1.0,
        w0_fine_window: (-5.36..=-1.21).contains(&w0),
        xi_simple_window: nf + 1.85 * c < xi && xi < nf + 2.13 * c,
    };
    let passed = checks.distance && checks.w0_window && checks.j0_window && checks.xi_window && checks.gap;
    Ok(NondegeneracyCertificate {
        n,
        xi1: xi,
        dist_to_radial_zeros: dist,
        w0_at_xi: w0,
        j0_at_xi: j0,
        gap,
        passed,
        checks,
        margins,
        bracket,
        nearby_radial: near.iter().map(|m| m.xi).collect(),
        xi2,
        gap_radial_near,
        gap_radial_tail,
        gap_same_n,
        gap_higher_harmonics,
    })
}

/// Certificates for every `N` in `[n_from, n_to]`, in increasing `N`.
pub fn scan_certificates(n_from: u32, n_to: u32, acc: &Accuracy) -> Result<Vec<NondegeneracyCertificate>> {
    if n_from < 100 || n_from > n_to {
        return Err(Error::DomainError(format!("scan needs 100 ≤ from ≤ to, got [{n_from}, {n_to}]")));
    }
    (n_from..=n_to).into_par_iter().map(|n| certify_nondegenerate(n, acc)).collect()
}

/// The `N` in `[n_from, n_to]` whose certificate passes.
pub fn scan_admissible(n_from: u32, n_to: u32, acc: &Accuracy) -> Result<Vec<u32>> {
    Ok(scan_certificates(n_from, n_to, acc)?.into_iter().filter(|c| c.passed).map(|c| c.n).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_radial_mode() {
        let m = radial_modes(1, &Accuracy::default()).unwrap()[0];
        assert!((m.xi - 3.196220616582541).abs() < 1e-10, "{}", m.xi);
    }

    #[test]
    fn first_mode_at_hundred() {
        let m = first_mode(100, &Accuracy::default()).unwrap();
        assert!((m.xi - 109.55277991742101).abs() < 1e-9, "{}", m.xi);
    }

    #[test]
    fn pole_is_reported() {
        let acc = Accuracy::default();
        let j = bessel_j_zero(5, 1, &acc).unwrap();
        assert!(matches!(cross_ratio_w(5, j, &acc), Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn window_search_matches_full_list() {
        let acc = Accuracy::default();
        let all = radial_modes(40, &acc).unwrap();
        let near = radial_modes_near(80.0, 10.0, &acc).unwrap();
        let expect: Vec<f64> = all.iter().filter(|m| (m.xi - 80.0).abs() < 10.0).map(|m| m.xi).collect();
        assert_eq!(near.iter().map(|m| m.xi).collect::<Vec<_>>(), expect);
    }
}
