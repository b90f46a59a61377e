//! The first angular-momentum-`N` clamped-plate eigenfunctions of the unit disk
//! and their Helmholtz (`v`) and screened-Poisson (`w`) components.
//!
//! With `ξ = √λ` and `c = 1/√π`,
//!
//! ```text
//! u(r, θ) = c·trig(Nθ)·(J_N(ξr)/J_N(ξ) − I_N(ξr)/I_N(ξ))
//! v = (Δu − λu)/(2λ) = −c·trig(Nθ)·J_N(ξr)/J_N(ξ)
//! w = (Δu + λu)/(2λ) = −c·trig(Nθ)·I_N(ξr)/I_N(ξ)
//! ```
//!
//! so that `u = w − v`.

use crate::disk_spectrum::PlateMode;
use crate::logspace::SignedLog;
use crate::quadrature::{integrate, periodic_trapezoid};
use crate::specfun::{bessel_j, log_abs_bessel_j, log_bessel_i, Accuracy};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{BufRead, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Cos,
    Sin,
}

impl Parity {
    pub fn trig(self, x: f64) -> f64 {
        match self {
            Parity::Cos => x.cos(),
            Parity::Sin => x.sin(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskEigenfunction {
    pub mode: PlateMode,
    pub parity: Parity,
    pub c: f64,
}

impl DiskEigenfunction {
    /// The normalised eigenfunction, `c = 1/√π`.
    pub fn new(mode: PlateMode, parity: Parity) -> Self {
        DiskEigenfunction { mode, parity, c: 1.0 / PI.sqrt() }
    }

    pub fn with_coefficient(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    fn angular(&self, theta: f64) -> f64 {
        self.parity.trig(f64::from(self.mode.n) * theta)
    }

    /// `∫_0^{2π} trig(Nθ)² dθ`.
    pub fn angular_mass(&self) -> f64 {
        match (self.mode.n, self.parity) {
            (0, Parity::Cos) => 2.0 * PI,
            (0, Parity::Sin) => 0.0,
            _ => PI,
        }
    }
}

/// `v` and `w` at one point, each as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentPair {
    pub v: SignedLog,
    pub w: SignedLog,
}

impl ComponentPair {
    pub fn v_value(&self) -> f64 {
        self.v.to_f64()
    }

    pub fn w_value(&self) -> f64 {
        self.w.to_f64()
    }

    /// `u = w − v`.
    pub fn u_value(&self) -> f64 {
        self.w_value() - self.v_value()
    }
}

/// `J_N(ξr)/J_N(ξ)` and `I_N(ξr)/I_N(ξ)` in signed-log form.
///
/// Below the turning point `ξr < N` the J value has no zeros and is taken in log
/// form; above it an absolute evaluation is used since `J_N(ξr)` is O(1) there.
pub fn radial_ratios(mode: &PlateMode, r: f64, acc: &Accuracy) -> Result<(SignedLog, SignedLog)> {
    if !(0.0..=2.0).contains(&r) {
        return Err(Error::DomainError(format!("radius {r} outside [0, 2]")));
    }
    let n = mode.n;
    let xi = mode.xi;
    if r == 0.0 {
        let one = if n == 0 { SignedLog::ONE } else { SignedLog::ZERO };
        return Ok((one, one));
    }
    let j_at = |x: f64| -> Result<SignedLog> {
        if x < f64::from(n) {
            Ok(log_abs_bessel_j(n, x, acc)?.to_signed_log())
        } else {
            Ok(SignedLog::from_f64(bessel_j(n, x, acc)?.value))
        }
    };
    let jr = j_at(xi * r)?.div(j_at(xi)?);
    let ir = SignedLog::from_ln(log_bessel_i(n, xi * r, acc)?.value - log_bessel_i(n, xi, acc)?.value);
    Ok((jr, ir))
}

pub fn eval_components(ef: &DiskEigenfunction, r: f64, theta: f64, acc: &Accuracy) -> Result<ComponentPair> {
    let (jr, ir) = radial_ratios(&ef.mode, r, acc)?;
    let scale = SignedLog::from_f64(-ef.c * ef.angular(theta));
    Ok(ComponentPair { v: jr.mul(scale), w: ir.mul(scale) })
}

pub fn eval_u(ef: &DiskEigenfunction, r: f64, theta: f64, acc: &Accuracy) -> Result<f64> {
    Ok(eval_components(ef, r, theta, acc)?.u_value())
}

/// `Δu = λ(v + w)`, in closed form.
pub fn laplacian(ef: &DiskEigenfunction, r: f64, theta: f64, acc: &Accuracy) -> Result<f64> {
    let p = eval_components(ef, r, theta, acc)?;
    Ok(ef.mode.lambda * (p.v_value() + p.w_value()))
}

/// `Δu` on the unit circle: `−2λ c·trig(Nθ)`, i.e. `−(2λ/√π)cos(Nθ)` for the
/// normalised cosine mode.
pub fn boundary_laplacian(ef: &DiskEigenfunction, theta: f64) -> f64 {
    -2.0 * ef.mode.lambda * ef.c * ef.angular(theta)
}

/// `∫_D u²` by composite Gauss–Legendre in `r` (doubling until converged) and the
/// exact angular integral.
pub fn l2_norm_sq(ef: &DiskEigenfunction, quad_points: usize, acc: &Accuracy) -> Result<f64> {
    if quad_points < 64 {
        return Err(Error::DomainError(format!("need at least 64 quadrature points, got {quad_points}")));
    }
    // One panel per half-oscillation of J_N(ξr) keeps each panel low order.
    let panels = ((ef.mode.xi / PI).ceil() as usize).max(8);
    let start = (quad_points / panels).max(8);
    let radial = integrate(
        |r| {
            let (jr, ir) = radial_ratios(&ef.mode, r, acc)?;
            let f = jr.to_f64() - ir.to_f64();
            Ok(f * f * r)
        },
        0.0,
        1.0,
        panels,
        start,
        1e-13,
        1 << 20,
    )?;
    Ok(ef.c * ef.c * ef.angular_mass() * radial.value)
}

/// `ln ∫_{D_R} I_0(ξ|x|)² dx`, the squared L² norm of `I_0(ξ|·|)` on the disk of radius `R`.
pub fn ln_i0_norm_sq(sqrt_lambda: f64, radius: f64, acc: &Accuracy) -> Result<f64> {
    let top = log_bessel_i(0, sqrt_lambda * radius, acc)?.value;
    let panels = ((sqrt_lambda * radius / 4.0).ceil() as usize).max(4);
    let q = integrate(
        |s| {
            if s == 0.0 {
                return Ok(0.0);
            }
            let l = log_bessel_i(0, sqrt_lambda * s, acc)?.value;
            Ok(s * (2.0 * (l - top)).exp())
        },
        0.0,
        radius,
        panels,
        16,
        1e-13,
        1 << 20,
    )?;
    Ok(2.0 * top + (2.0 * PI * q.value).ln())
}

/// Coefficient `b` of `b·I_0(ξ|x|)` in `f`, from the L² projection over the disk of
/// radius `R`: `⟨f, I_0⟩ / ‖I_0‖²`. The angular average uses `angular_points`
/// trapezoid nodes.
pub fn project_onto_i0<F>(f: F, sqrt_lambda: f64, radius: f64, angular_points: usize, acc: &Accuracy) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let ln_norm = ln_i0_norm_sq(sqrt_lambda, radius, acc)?;
    let top = log_bessel_i(0, sqrt_lambda * radius, acc)?.value;
    let panels = ((sqrt_lambda * radius / 4.0).ceil() as usize).max(4);
    let q = integrate(
        |s| {
            if s == 0.0 {
                return Ok(0.0);
            }
            let mut first_err = None;
            let avg = periodic_trapezoid(
                |t| match f(s, t) {
                    Ok(v) => v,
                    Err(e) => {
                        first_err.get_or_insert(e);
                        0.0
                    }
                },
                angular_points,
            );
            if let Some(e) = first_err {
                return Err(e);
            }
            let l = log_bessel_i(0, sqrt_lambda * s, acc)?.value;
            Ok(s * avg * (l - top).exp())
        },
        0.0,
        radius,
        panels,
        16,
        1e-13,
        1 << 20,
    )?;
    // ⟨f, I_0⟩ = e^{top} q;  b = e^{top} q / e^{ln_norm}
    Ok(q.value * (top - ln_norm).exp())
}

/// One row of a grid export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub r: f64,
    pub theta: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub log_abs_v: f64,
    pub log_abs_w: f64,
}

pub const CSV_HEADER: &str = "r,theta,u,v,w,log_abs_v,log_abs_w";

/// Evaluate on the tensor grid `rs × thetas` (row-major in `r`).
pub fn eval_grid(ef: &DiskEigenfunction, rs: &[f64], thetas: &[f64], acc: &Accuracy) -> Result<Vec<GridRow>> {
    let points: Vec<(f64, f64)> = rs.iter().flat_map(|&r| thetas.iter().map(move |&t| (r, t))).collect();
    points
        .par_iter()
        .map(|&(r, theta)| {
            let p = eval_components(ef, r, theta, acc)?;
            Ok(GridRow {
                r,
                theta,
                u: p.u_value(),
                v: p.v_value(),
                w: p.w_value(),
                log_abs_v: p.v.ln,
                log_abs_w: p.w.ln,
            })
        })
        .collect()
}

/// Plain CSV: '.' decimals, '\n' line endings, shortest round-trip float format.
pub fn write_grid_csv<W: Write>(rows: &[GridRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for g in rows {
        writeln!(out, "{},{},{},{},{},{},{}", g.r, g.theta, g.u, g.v, g.w, g.log_abs_v, g.log_abs_w)?;
    }
    Ok(())
}

pub fn read_grid_csv<R: BufRead>(input: R) -> Result<Vec<GridRow>> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .transpose()
        .map_err(|e| Error::DomainError(e.to_string()))?
        .unwrap_or_default();
    if header.trim_end() != CSV_HEADER {
        return Err(Error::DomainError(format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::DomainError(e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        let f: Vec<f64> = line
            .split(',')
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::DomainError(format!("line {}: {e}", i + 2)))?;
        if f.len() != 7 {
            return Err(Error::DomainError(format!("line {}: expected 7 fields, got {}", i + 2, f.len())));
        }
        rows.push(GridRow { r: f[0], theta: f[1], u: f[2], v: f[3], w: f[4], log_abs_v: f[5], log_abs_w: f[6] });
    }
    Ok(rows)
}
