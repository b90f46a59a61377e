//! First and second shape derivatives at the disk for boundary fields given as
//! cosine polynomials, and scalar audits of the constant chains used to build
//! the deformation family.
//!
//! Everything here is for the cosine mode `u = J_N-part − I_N-part` normalised
//! so that `Δu = −(2λ/√π) cos Nθ` on the unit circle.

mod constants;
mod jacobians;

pub use constants::*;
pub use jacobians::*;

use crate::audit::{AuditReport, CheckKind, Relation};
use crate::disk_spectrum::{cross_ratio_w, NondegeneracyCertificate, PlateMode};
use crate::eigenfunctions::{boundary_laplacian, DiskEigenfunction, Parity};
use crate::logspace::SignedLog;
use crate::quadrature::periodic_trapezoid;
use crate::specfun::{bessel_j, log_bessel_i, Accuracy};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Angular points for the trapezoid cross-checks.
pub const CROSS_CHECK_POINTS: usize = 1 << 14;

/// Normal component `X·n(θ) = Σ aₘ cos(mθ)` of a boundary deformation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundaryField {
    pub coeffs: BTreeMap<u32, f64>,
}

impl BoundaryField {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, f64)>>(pairs: I) -> Self {
        let mut f = Self::new();
        for (m, a) in pairs {
            f.add_term(m, a);
        }
        f
    }

    /// `r∂_r`: `X·n = 1`.
    pub fn scaling() -> Self {
        Self::from_pairs([(0, 1.0)])
    }

    /// `cos 2Nθ + 1`.
    pub fn x1(n: u32) -> Self {
        Self::from_pairs([(0, 1.0), (2 * n, 1.0)])
    }

    /// `cos Nθ`.
    pub fn x2(n: u32) -> Self {
        Self::from_pairs([(n, 1.0)])
    }

    /// `cos 3Nθ + cos 2Nθ − ½`.
    pub fn x3(n: u32) -> Self {
        Self::from_pairs([(0, -0.5), (2 * n, 1.0), (3 * n, 1.0)])
    }

    pub fn add_term(&mut self, m: u32, a: f64) {
        let e = self.coeffs.entry(m).or_insert(0.0);
        *e += a;
        if *e == 0.0 {
            self.coeffs.remove(&m);
        }
    }

    pub fn coeff(&self, m: u32) -> f64 {
        self.coeffs.get(&m).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.coeffs.iter().map(|(&m, &a)| a * (f64::from(m) * theta).cos()).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_pairs(self.coeffs.iter().map(|(&m, &a)| (m, s * a)))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, &a) in &other.coeffs {
            out.add_term(m, a);
        }
        out
    }

    /// Exact product via `cos a cos b = ½(cos(a−b) + cos(a+b))`.
    pub fn product(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (&m, &a) in &self.coeffs {
            for (&k, &b) in &other.coeffs {
                out.add_term(m.abs_diff(k), 0.5 * a * b);
                out.add_term(m + k, 0.5 * a * b);
            }
        }
        out
    }

    pub fn square(&self) -> Self {
        self.product(self)
    }

    /// `∫₀^{2π} (X·n) cos(mθ) dθ`.
    pub fn moment(&self, m: u32) -> f64 {
        let a = self.coeff(m);
        if m == 0 {
            2.0 * PI * a
        } else {
            PI * a
        }
    }

    pub fn max_harmonic(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }
}

/// `d(λ²)/dt = −∫(X·n)|Δu|² = −2λ²(2a₀ + a_{2N})`.
pub fn hadamard_dlambda2(mode: &PlateMode, field: &BoundaryField) -> f64 {
    let l2 = mode.lambda * mode.lambda;
    -2.0 * l2 * (2.0 * field.coeff(0) + field.coeff(2 * mode.n))
}

fn cos_mode(mode: &PlateMode) -> DiskEigenfunction {
    DiskEigenfunction::new(*mode, Parity::Cos)
}

/// `−∫(X·n)|Δu|²` by the trapezoid rule, with `Δu` taken from the eigenfunction.
pub fn hadamard_by_quadrature(mode: &PlateMode, field: &BoundaryField, points: usize) -> f64 {
    let ef = cos_mode(mode);
    -periodic_trapezoid(|t| field.eval(t) * boundary_laplacian(&ef, t).powi(2), points)
}

/// Require a passed certificate matching `mode`.
pub fn require_certified(mode: &PlateMode, cert: Option<&NondegeneracyCertificate>) -> Result<()> {
    match cert {
        Some(c) if c.passed && c.n == mode.n && c.xi1 == mode.xi => Ok(()),
        _ => Err(Error::NondegeneracyRequired(mode.n)),
    }
}

/// First variation of the Helmholtz component at the origin:
/// `(√λ/√π³) J_0(√λ)⁻¹ W_0(√λ)⁻¹ ∫(X·n) cos Nθ`.
pub fn dv0(mode: &PlateMode, cert: Option<&NondegeneracyCertificate>, field: &BoundaryField, acc: &Accuracy) -> Result<f64> {
    require_certified(mode, cert)?;
    let sl = mode.sqrt_lambda();
    let j0 = bessel_j(0, sl, acc)?.value;
    let w0 = cross_ratio_w(0, sl, acc)?.value;
    Ok(sl / PI.powf(1.5) / j0 / w0 * field.moment(mode.n))
}

/// `α = (1/2π)∫(X·n)²Δu` and `ẅ(0) = α / I_0(√λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondVariation {
    /// `cos Nθ` coefficient of `(X·n)²`.
    pub gamma_n: f64,
    pub alpha: f64,
    pub w0dd: SignedLog,
}

pub fn alpha_and_w0dd(mode: &PlateMode, field: &BoundaryField, acc: &Accuracy) -> Result<SecondVariation> {
    let sq = field.square();
    let gamma_n = sq.coeff(mode.n);
    // (1/2π)·(−2λ/√π)·∫(X·n)² cos Nθ.
    let alpha = -(2.0 * mode.lambda / PI.sqrt()) * (sq.moment(mode.n) / (2.0 * PI));
    let ln_i0 = log_bessel_i(0, mode.sqrt_lambda(), acc)?.value;
    Ok(SecondVariation { gamma_n, alpha, w0dd: SignedLog::from_f64(alpha).div(SignedLog::from_ln(ln_i0)) })
}

/// `(1/2π)∫(X·n)²Δu` by the trapezoid rule.
pub fn alpha_by_quadrature(mode: &PlateMode, field: &BoundaryField, points: usize) -> f64 {
    let ef = cos_mode(mode);
    periodic_trapezoid(|t| field.eval(t).powi(2) * boundary_laplacian(&ef, t), points) / (2.0 * PI)
}

/// `(∫(X·n) cos Nθ, ∫(X·n)(1 + cos 2Nθ))`; both vanish on the tangent space.
pub fn tangent_constraints(field: &BoundaryField, n: u32) -> (f64, f64) {
    (field.moment(n), field.moment(0) + field.moment(2 * n))
}

pub fn tangent_space_member(field: &BoundaryField, n: u32) -> bool {
    let scale = 1.0 + field.coeffs.values().map(|a| a.abs()).sum::<f64>();
    let (c1, c2) = tangent_constraints(field, n);
    c1.abs() <= 1e-12 * scale && c2.abs() <= 1e-12 * scale
}

/// Closed forms against trapezoid quadrature, tangent membership of the three
/// fields, `α` for `X₃`, and the `X₁`/`X₂` derivatives.
pub fn audit_shape_derivatives(cert: &NondegeneracyCertificate, acc: &Accuracy) -> Result<AuditReport> {
    let mode = cert.mode();
    let n = mode.n;
    let lam = mode.lambda;
    let l2 = lam * lam;
    let mut rep = AuditReport::new("tangent");
    let pts = CROSS_CHECK_POINTS;

    let s = BoundaryField::scaling();
    let h = hadamard_dlambda2(&mode, &s);
    rep.require("scaling: |d(λ²)/dt + 4λ²| / λ²", (h + 4.0 * l2).abs() / l2, Relation::Le, 0.0);
    let q = hadamard_by_quadrature(&mode, &s, pts);
    rep.require("scaling: |closed − quadrature| / λ²", (h - q).abs() / l2, Relation::Le, 1e-10);

    let (x1, x2, x3) = (BoundaryField::x1(n), BoundaryField::x2(n), BoundaryField::x3(n));
    for (name, f) in [("X1", &x1), ("X2", &x2), ("X3", &x3)] {
        let d = (hadamard_dlambda2(&mode, f) - hadamard_by_quadrature(&mode, f, pts)).abs() / l2;
        rep.require(format!("{name}: |Hadamard closed − quadrature| / λ²"), d, Relation::Le, 1e-10);
        let sv = alpha_and_w0dd(&mode, f, acc)?;
        let d = (sv.alpha - alpha_by_quadrature(&mode, f, pts)).abs() / lam;
        rep.require(format!("{name}: |α closed − quadrature| / λ"), d, Relation::Le, 1e-10);
    }

    let (c1, c2) = tangent_constraints(&x3, n);
    rep.require("X3: |∫(X·n) cos Nθ|", c1.abs(), Relation::Le, 0.0);
    rep.require("X3: |∫(X·n)(1 + cos 2Nθ)|", c2.abs(), Relation::Le, 0.0);
    rep.require("X1: |∫(X·n)(1 + cos 2Nθ)| (not tangent)", tangent_constraints(&x1, n).1.abs(), Relation::Gt, 0.0);
    rep.require("X2: |∫(X·n) cos Nθ| (not tangent)", tangent_constraints(&x2, n).0.abs(), Relation::Gt, 0.0);

    let sv = alpha_and_w0dd(&mode, &x3, acc)?;
    rep.require("X3: |α + λ/√π| / λ", (sv.alpha + lam / PI.sqrt()).abs() / lam, Relation::Le, 1e-15);
    rep.require("X3: ẅ(0) < 0 (log domain sign)", f64::from(sv.w0dd.sign), Relation::Lt, 0.0);

    let h1 = hadamard_dlambda2(&mode, &x1);
    rep.require("X1: ||d(λ²)/dt| − 6λ²| / λ²", (h1.abs() - 6.0 * l2).abs() / l2, Relation::Le, 1e-15);
    rep.check("X1: d(λ²)/dt / (6λ²), stated as +1", h1 / (6.0 * l2), Relation::Ge, 1.0, 0.0, CheckKind::Informational);
    rep.note("X1 sign: the Hadamard formula gives −6λ² where the stated derivative is +6λ²; only the magnitude enters later bounds.");
    for (name, f) in [("X1", &x1), ("X3", &x3)] {
        rep.require(format!("{name}: |dv0|"), dv0(&mode, Some(cert), f, acc)?.abs(), Relation::Le, 0.0);
    }
    let d2 = dv0(&mode, Some(cert), &x2, acc)?;
    let expect = mode.sqrt_lambda() / PI.sqrt() / cert.j0_at_xi / cert.w0_at_xi;
    rep.require("X2: |dv0 − (√λ/√π)/(J0 W0)| / |dv0|", (d2 - expect).abs() / d2.abs(), Relation::Le, 1e-12);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_to_sum() {
        let f = BoundaryField::from_pairs([(0, 2.0), (3, 1.0)]);
        let sq = f.square();
        // (2 + cos3θ)² = 4.5 + 4cos3θ + ½cos6θ.
        assert_eq!(sq, BoundaryField::from_pairs([(0, 4.5), (3, 4.0), (6, 0.5)]));
    }

    #[test]
    fn cancelled_terms_are_dropped() {
        let f = BoundaryField::x2(5).plus(&BoundaryField::x2(5).scale(-1.0));
        assert!(f.coeffs.is_empty());
        assert_eq!(f.max_harmonic(), 0);
    }
}
