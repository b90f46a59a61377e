//! Cut-off ramps and sampled `C¹` norms of the Jacobians of the deformation
//! fields `Re(Σ c_K z^K) χ(|x|^{2N}) (x∂_x + y∂_y)`.

use crate::audit::{AuditReport, Relation};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Derivative budget `max(‖χ‖, ‖χ'‖, ‖χ''‖)` the Jacobian bounds assume.
pub const RAMP_BUDGET: f64 = 6.0;

/// A ramp that is 0 below `lo` and 1 above 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RampSpec {
    /// `C¹`: two quadratic pieces meeting at the midpoint, `|χ''| = 4/(1 − lo)²`.
    PiecewiseQuadratic { lo: f64 },
    /// `C^∞`: `χ''` is a smoothed `±4/(1 − lo)²` square wave whose flanks take
    /// the fraction `edge` of each half of the transition.
    Smooth { lo: f64, edge: f64 },
}

impl Default for RampSpec {
    fn default() -> Self {
        RampSpec::PiecewiseQuadratic { lo: (-2.0f64).exp() }
    }
}

impl RampSpec {
    pub fn lo(&self) -> f64 {
        match *self {
            RampSpec::PiecewiseQuadratic { lo } | RampSpec::Smooth { lo, .. } => lo,
        }
    }
}

/// Classic `C^∞` step from 0 at `v = 0` to 1 at `v = 1`.
fn smooth_step(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else if v >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / v).exp();
        let b = (-1.0 / (1.0 - v)).exp();
        a / (a + b)
    }
}

/// Unnormalised `χ''` on `u ∈ [0, 1]`, odd about `u = ½`.
fn smooth_profile(u: f64, edge: f64) -> f64 {
    let w = 0.5 * edge;
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else if u < 0.5 {
        smooth_step(u / w) * smooth_step((0.5 - u) / w)
    } else {
        -smooth_step((u - 0.5) / w) * smooth_step((1.0 - u) / w)
    }
}

const TABLE_CELLS: usize = 1 << 13;

/// Cumulative integrals of the smooth profile at cell nodes.
#[derive(Debug, Clone)]
struct SmoothTable {
    edge: f64,
    b: Vec<f64>,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl SmoothTable {
    fn new(edge: f64) -> Self {
        let h = 1.0 / TABLE_CELLS as f64;
        let b: Vec<f64> = (0..=TABLE_CELLS).map(|i| smooth_profile(i as f64 * h, edge)).collect();
        let mut p = vec![0.0; TABLE_CELLS + 1];
        let mut q = vec![0.0; TABLE_CELLS + 1];
        for i in 0..TABLE_CELLS {
            // Simpson on each cell for ∫b, then the Hermite-exact rule for ∫p.
            let mid = smooth_profile((i as f64 + 0.5) * h, edge);
            p[i + 1] = p[i] + h / 6.0 * (b[i] + 4.0 * mid + b[i + 1]);
            q[i + 1] = q[i] + 0.5 * h * (p[i] + p[i + 1]) + h * h / 12.0 * (b[i] - b[i + 1]);
        }
        SmoothTable { edge, b, p, q }
    }

    /// `(∫∫b, ∫b, b)` at `u` by cubic Hermite interpolation.
    fn eval(&self, u: f64) -> [f64; 3] {
        let h = 1.0 / TABLE_CELLS as f64;
        let i = ((u / h) as usize).min(TABLE_CELLS - 1);
        let s = u / h - i as f64;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s).powi(2),
            s * (1.0 - s).powi(2),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        let herm = |y0: f64, y1: f64, d0: f64, d1: f64| h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
        let p = herm(self.p[i], self.p[i + 1], self.b[i], self.b[i + 1]);
        let q = herm(self.q[i], self.q[i + 1], self.p[i], self.p[i + 1]);
        [q, p, smooth_profile(u, self.edge)]
    }
}

#[derive(Debug, Clone)]
pub struct Ramp {
    pub spec: RampSpec,
    lo: f64,
    width: f64,
    /// `χ`-normalising amplitude in the unit variable.
    amp: f64,
    table: Option<SmoothTable>,
}

impl Ramp {
    pub fn new(spec: RampSpec) -> Result<Self> {
        let lo = spec.lo();
        if !(lo >= (-2.0f64).exp() && lo < 1.0) {
            return Err(Error::RampViolation(format!("transition must lie in [e^-2, 1), got lo = {lo}")));
        }
        let width = 1.0 - lo;
        match spec {
            RampSpec::PiecewiseQuadratic { .. } => Ok(Ramp { spec, lo, width, amp: 4.0, table: None }),
            RampSpec::Smooth { edge, .. } => {
                if !(edge > 0.0 && edge <= 0.5) {
                    return Err(Error::DomainError(format!("smooth ramp edge must be in (0, 1/2], got {edge}")));
                }
                let t = SmoothTable::new(edge);
                let amp = 1.0 / t.q[TABLE_CELLS];
                Ok(Ramp { spec, lo, width, amp, table: Some(t) })
            }
        }
    }

    /// `(χ(q), χ'(q), χ''(q))`.
    pub fn eval(&self, q: f64) -> [f64; 3] {
        let u = (q - self.lo) / self.width;
        if u <= 0.0 {
            return [0.0, 0.0, 0.0];
        }
        if u >= 1.0 {
            return [1.0, 0.0, 0.0];
        }
        let (w, w2) = (self.width, self.width * self.width);
        match &self.table {
            None if u < 0.5 => [2.0 * u * u, 4.0 * u / w, 4.0 / w2],
            None => [1.0 - 2.0 * (1.0 - u).powi(2), 4.0 * (1.0 - u) / w, -4.0 / w2],
            Some(t) => {
                let [c, d1, d2] = t.eval(u);
                [self.amp * c, self.amp * d1 / w, self.amp * d2 / w2]
            }
        }
    }

    /// Sup norms of `χ`, `χ'`, `χ''` on a dense grid of the transition.
    pub fn budget(&self) -> RampBudget {
        let mut out = RampBudget { sup: 0.0, sup_d1: 0.0, sup_d2: 0.0 };
        let m = 100_000;
        for i in 0..=m {
            let q = self.lo + self.width * f64::from(i) / f64::from(m);
            let [c, d1, d2] = self.eval(q);
            out.sup = out.sup.max(c.abs());
            out.sup_d1 = out.sup_d1.max(d1.abs());
            out.sup_d2 = out.sup_d2.max(d2.abs());
        }
        if self.table.is_none() {
            // The grid may miss the jump of χ'' at the ends.
            out.sup_d2 = 4.0 / (self.width * self.width);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RampBudget {
    pub sup: f64,
    pub sup_d1: f64,
    pub sup_d2: f64,
}

impl RampBudget {
    pub fn max(&self) -> f64 {
        self.sup.max(self.sup_d1).max(self.sup_d2)
    }
}

/// Build the ramp and reject it if it exceeds [`RAMP_BUDGET`].
pub fn checked_ramp(spec: RampSpec) -> Result<(Ramp, RampBudget)> {
    let ramp = Ramp::new(spec)?;
    let b = ramp.budget();
    if b.max() > RAMP_BUDGET {
        return Err(Error::RampViolation(format!(
            "max(|χ|, |χ'|, |χ''|) = {:.4} > {RAMP_BUDGET} (|χ'| = {:.4}, |χ''| = {:.4})",
            b.max(),
            b.sup_d1,
            b.sup_d2
        )));
    }
    Ok((ramp, b))
}

/// Deformation field `Re(Σ c_K z^K) χ(|x|^{2N}) (x∂_x + y∂_y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialField {
    pub name: String,
    /// `(K, c_K)`.
    pub terms: Vec<(u32, f64)>,
    /// Stated bound on `‖J‖_{C¹}` as a multiple of `N²`.
    pub bound_n2: f64,
    /// Polynomial bound `(a N² + b N + c)` before the ramp budget is applied.
    pub poly: [f64; 3],
}

impl RadialField {
    pub fn deformation_fields(n: u32) -> [RadialField; 3] {
        [
            RadialField { name: "X1".into(), terms: vec![(2 * n, 1.0), (0, 1.0)], bound_n2: 600.0, poly: [80.0, 36.0, 4.0] },
            RadialField { name: "X2".into(), terms: vec![(n, 1.0)], bound_n2: 230.0, poly: [36.0, 18.0, 2.0] },
            RadialField { name: "X3".into(), terms: vec![(3 * n, 1.0), (2 * n, 1.0), (0, -0.5)], bound_n2: 1070.0, poly: [172.0, 60.0, 5.0] },
        ]
    }
}

/// `g = Re Σ c_K z^K` with gradient and Hessian `(g_xx, g_xy, g_yy)`.
fn harmonic_part(terms: &[(u32, f64)], r: f64, theta: f64) -> (f64, [f64; 2], [f64; 3]) {
    let mut g = 0.0;
    let mut d = [0.0; 2];
    let mut hs = [0.0; 3];
    for &(k, c) in terms {
        let kf = f64::from(k);
        g += c * r.powi(k as i32) * (kf * theta).cos();
        if k >= 1 {
            let a = c * kf * r.powi(k as i32 - 1);
            let ph = (kf - 1.0) * theta;
            d[0] += a * ph.cos();
            d[1] -= a * ph.sin();
        }
        if k >= 2 {
            let a = c * kf * (kf - 1.0) * r.powi(k as i32 - 2);
            let ph = (kf - 2.0) * theta;
            hs[0] += a * ph.cos();
            hs[1] -= a * ph.sin();
            hs[2] -= a * ph.cos();
        }
    }
    (g, d, hs)
}

fn op_norm(m: [[f64; 2]; 2]) -> f64 {
    let f2 = m[0][0].powi(2) + m[0][1].powi(2) + m[1][0].powi(2) + m[1][1].powi(2);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (f2 * f2 - 4.0 * det * det).max(0.0).sqrt();
    (0.5 * (f2 + disc)).sqrt()
}

/// Jacobian `J` and its partial derivatives `∂_x J`, `∂_y J` at a point.
pub fn field_jacobian(field: &RadialField, n: u32, ramp: &Ramp, r: f64, theta: f64) -> [[[f64; 2]; 2]; 3] {
    let nf = f64::from(n);
    let x = [r * theta.cos(), r * theta.sin()];
    let s = r * r;
    let q = s.powi(n as i32);
    let [h, h1, h2] = ramp.eval(q);
    // ∇q = 2N q/s · x, Hq = 2N q/s · I + 4N(N−1) q/s² · x xᵀ.
    let a = 2.0 * nf * q / s;
    let bq = 4.0 * nf * (nf - 1.0) * q / (s * s);
    let dq = [a * x[0], a * x[1]];
    let dh = [h1 * dq[0], h1 * dq[1]];
    let hq = |j: usize, k: usize| if j == k { a } else { 0.0 } + bq * x[j] * x[k];
    let hh = |j: usize, k: usize| h2 * dq[j] * dq[k] + h1 * hq(j, k);
    let (g, dg, hg) = harmonic_part(&field.terms, r, theta);
    let hgm = |j: usize, k: usize| match (j, k) {
        (0, 0) => hg[0],
        (1, 1) => hg[2],
        _ => hg[1],
    };
    let p = g * h;
    let dp = [h * dg[0] + g * dh[0], h * dg[1] + g * dh[1]];
    let hp = |j: usize, k: usize| h * hgm(j, k) + dg[j] * dh[k] + dh[j] * dg[k] + g * hh(j, k);
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let mut out = [[[0.0; 2]; 2]; 3];
    for i in 0..2 {
        for j in 0..2 {
            out[0][i][j] = delta(i, j) * p + x[i] * dp[j];
            for k in 0..2 {
                out[1 + k][i][j] = delta(i, j) * dp[k] + delta(i, k) * dp[j] + x[i] * hp(j, k);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobianGrid {
    pub radial: usize,
    /// Defaults to `max(2048, 64N)` so every harmonic is finely resolved.
    pub angular: Option<usize>,
}

impl Default for JacobianGrid {
    fn default() -> Self {
        JacobianGrid { radial: 2048, angular: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobianNorms {
    pub field: String,
    pub sup_j: f64,
    pub sup_dx_j: f64,
    pub sup_dy_j: f64,
    /// `sup|J| + sup|∂_x J| + sup|∂_y J|`.
    pub c1: f64,
    pub bound: f64,
    pub poly_bound: f64,
}

/// Sampled `C¹` norms over the support annulus `r^{2N} ≥ lo`.
pub fn sample_jacobian_norms(n: u32, ramp: &Ramp, grid: &JacobianGrid) -> Result<Vec<JacobianNorms>> {
    if n < 10 {
        return Err(Error::DomainError(format!("Jacobian bounds need N >= 10, got {n}")));
    }
    if grid.radial < 2 {
        return Err(Error::DomainError("radial grid needs at least 2 points".into()));
    }
    let nf = f64::from(n);
    let nt = grid.angular.unwrap_or((64 * n as usize).max(2048));
    let r0 = ramp.lo.powf(0.5 / nf);
    let fields = RadialField::deformation_fields(n);
    let maxima = (0..grid.radial)
        .into_par_iter()
        .map(|i| {
            let r = r0 + (1.0 - r0) * i as f64 / (grid.radial - 1) as f64;
            let mut m = [[0.0f64; 3]; 3];
            for j in 0..nt {
                let theta = 2.0 * PI * j as f64 / nt as f64;
                for (f, field) in fields.iter().enumerate() {
                    let jac = field_jacobian(field, n, ramp, r, theta);
                    for c in 0..3 {
                        m[f][c] = m[f][c].max(op_norm(jac[c]));
                    }
                }
            }
            m
        })
        .reduce(
            || [[0.0; 3]; 3],
            |mut a, b| {
                for f in 0..3 {
                    for c in 0..3 {
                        a[f][c] = a[f][c].max(b[f][c]);
                    }
                }
                a
            },
        );
    let budget = ramp.budget().max();
    Ok(fields
        .iter()
        .zip(maxima)
        .map(|(field, m)| JacobianNorms {
            field: field.name.clone(),
            sup_j: m[0],
            sup_dx_j: m[1],
            sup_dy_j: m[2],
            c1: m[0] + m[1] + m[2],
            bound: field.bound_n2 * nf * nf,
            poly_bound: (field.poly[0] * nf * nf + field.poly[1] * nf + field.poly[2]) * budget,
        })
        .collect())
}

pub fn audit_lemma10_jacobians(n: u32, spec: RampSpec, grid: &JacobianGrid) -> Result<AuditReport> {
    let (ramp, budget) = checked_ramp(spec)?;
    let norms = sample_jacobian_norms(n, &ramp, grid)?;
    let nf = f64::from(n);
    let mut rep = AuditReport::new("10");
    rep.require("ramp max(|χ|, |χ'|, |χ''|)", budget.max(), Relation::Le, RAMP_BUDGET);
    for jn in &norms {
        rep.require(format!("{}: sampled ‖J‖_C¹ vs stated N² bound", jn.field), jn.c1, Relation::Le, jn.bound);
        rep.inform(format!("{}: sampled ‖J‖_C¹ vs polynomial bound × ramp budget", jn.field), jn.c1, Relation::Le, jn.poly_bound);
        rep.inform(format!("{}: polynomial bound × 6 vs stated N² bound", jn.field), jn.poly_bound / budget.max() * RAMP_BUDGET, Relation::Le, jn.bound);
    }

    // Fields vanish on r ≤ 1 − 1/N, and F_0 has Jacobian I on the unit circle.
    let inner = 1.0 - 1.0 / nf;
    let fields = RadialField::deformation_fields(n);
    let mut inner_max = 0.0f64;
    for i in 0..=256 {
        let r = (inner * f64::from(i) / 256.0).max(1e-3);
        for j in 0..256 {
            let theta = 2.0 * PI * f64::from(j) / 256.0;
            for f in &fields {
                let jac = field_jacobian(f, n, &ramp, r, theta);
                inner_max = inner_max.max(jac.iter().map(|m| op_norm(*m)).fold(0.0, f64::max));
            }
        }
    }
    rep.require("max ‖J‖, ‖∂J‖ on r ≤ 1 − 1/N", inner_max, Relation::Le, 0.0);
    let f0 = RadialField { name: "F0".into(), terms: vec![(0, 1.0)], bound_n2: 0.0, poly: [0.0; 3] };
    let mut dev = 0.0f64;
    for j in 0..64 {
        let jac = field_jacobian(&f0, n, &ramp, 1.0, 2.0 * PI * f64::from(j) / 64.0);
        dev = dev.max(op_norm([[jac[0][0][0] - 1.0, jac[0][0][1]], [jac[0][1][0], jac[0][1][1] - 1.0]]));
    }
    rep.require("F0 on the unit circle: ‖J − I‖", dev, Relation::Le, 1e-12);
    for jn in &norms {
        rep.detail(jn);
    }
    rep.detail(&budget);
    let nt = grid.angular.unwrap_or((64 * n as usize).max(2048));
    rep.note(format!(
        "sampled sup norms on a {}x{nt} polar grid are lower bounds of the true sup norms",
        grid.radial
    ));
    if matches!(spec, RampSpec::PiecewiseQuadratic { .. }) {
        rep.note("the piecewise-quadratic ramp is C¹ with a bounded, discontinuous χ''; the bounds only use sup|χ''|");
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_ramp_is_c1() {
        let r = Ramp::new(RampSpec::default()).unwrap();
        let lo = (-2.0f64).exp();
        let mid = 0.5 * (1.0 + lo);
        let a = r.eval(mid - 1e-12);
        let b = r.eval(mid + 1e-12);
        assert!((a[0] - 0.5).abs() < 1e-10 && (a[1] - b[1]).abs() < 1e-9);
        assert_eq!(r.eval(1.0), [1.0, 0.0, 0.0]);
        assert_eq!(r.eval(lo), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn smooth_ramp_reaches_one_flat() {
        let r = Ramp::new(RampSpec::Smooth { lo: (-2.0f64).exp(), edge: 0.1 }).unwrap();
        let e = r.eval(1.0 - 1e-9);
        assert!((e[0] - 1.0).abs() < 1e-9 && e[1].abs() < 1e-6);
    }

    #[test]
    fn op_norm_of_diagonal() {
        assert!((op_norm([[3.0, 0.0], [0.0, -4.0]]) - 4.0).abs() < 1e-15);
        assert!((op_norm([[0.0, 2.0], [0.0, 0.0]]) - 2.0).abs() < 1e-15);
    }
}
