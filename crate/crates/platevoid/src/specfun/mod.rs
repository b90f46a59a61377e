//! Bessel functions of integer order with absolute error bounds.
//!
//! `J_n` uses the ascending series where its terms decrease from the start
//! (`x²/4 ≤ n + 1`), Hankel asymptotics for `n ≤ 1, x ≥ 25`, and Miller's
//! backward recurrence everywhere else. `I_n` is summed in log form from its
//! positive ascending series. Every path has an independent alternative exposed
//! for cross-checking: [`bessel_j_series`], [`bessel_j_recurrence`] and
//! [`log_bessel_i_recurrence`].

pub(crate) mod dd;
mod debye;
mod hankel;
mod miller;
mod modulus;
pub(crate) mod real;
mod series;
mod zeros;

pub use debye::{log_bessel_i_debye, log_bessel_j_debye};
pub use modulus::{bessel_y0, bessel_y1, modulus_phase_0};
pub use zeros::{bessel_j_zero, lang_wong_window, A1};

use crate::logspace::SignedLog;
use crate::{Error, Result};
use real::{Real, Scaled};
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use dd::Dd;

/// Name of the environment variable selecting the working precision.
pub const PRECISION_ENV: &str = "PLATE_VOID_PRECISION";

const F64_UNIT: f64 = f64::EPSILON / 2.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    /// Double-double arithmetic (about 31 significant digits); results are
    /// still reported as f64, with correspondingly smaller error bounds.
    Extended,
}

impl FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(Error::DomainError(format!("unknown precision {other:?} (double|extended)"))),
        }
    }
}

impl Precision {
    /// Precision named by `PLATE_VOID_PRECISION`, if set.
    pub fn from_env() -> Result<Option<Precision>> {
        match std::env::var(PRECISION_ENV) {
            Ok(v) => v.parse().map(Some),
            Err(_) => Ok(None),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        }
    }
}

/// Error budget for a special-function evaluation.
///
/// For `J_n` the budget is absolute. For `I_n` it is applied to `ln I_n`, i.e.
/// it is a relative budget on `I_n` itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub target_abs_err: f64,
    pub max_terms: usize,
    #[serde(default)]
    pub precision: Precision,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy { target_abs_err: 1e-10, max_terms: 4_000_000, precision: Precision::Double }
    }
}

impl Accuracy {
    pub fn new(target_abs_err: f64, max_terms: usize) -> Self {
        assert!(target_abs_err > 0.0 && max_terms >= 1, "invalid accuracy");
        Accuracy { target_abs_err, max_terms, precision: Precision::Double }
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn with_target(mut self, target: f64) -> Self {
        assert!(target > 0.0);
        self.target_abs_err = target;
        self
    }

    fn extended(&self) -> bool {
        self.precision == Precision::Extended
    }
}

/// A value with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselEval {
    pub value: f64,
    pub err: f64,
}

/// `sign * exp(ln)` with an absolute error bound on `ln`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogEval {
    pub sign: i8,
    pub ln: f64,
    pub err: f64,
}

impl LogEval {
    pub fn to_signed_log(self) -> SignedLog {
        SignedLog::new(self.sign, self.ln)
    }
}

/// Internal result: both linear and log forms with their errors.
#[derive(Debug, Clone, Copy)]
struct Eval {
    sign: i8,
    ln: f64,
    value: f64,
    err_abs: f64,
    err_log: f64,
    terms: usize,
}

impl Eval {
    fn exact(v: f64) -> Eval {
        let s = SignedLog::from_f64(v);
        Eval { sign: s.sign, ln: s.ln, value: v, err_abs: 0.0, err_log: 0.0, terms: 0 }
    }

    fn from_scaled<R: Real>(v: Scaled<R>, rel: f64, floor: f64, terms: usize) -> Eval {
        let value = v.to_f64();
        let ln = v.ln_abs();
        // Conversion to f64 and the f64 logarithm each add a rounding.
        let conv = if R::UNIT < F64_UNIT { F64_UNIT } else { 0.0 };
        let err_abs = value.abs() * (rel + conv) + floor;
        let err_log = if v.sign() == 0 {
            f64::INFINITY
        } else {
            let floor_rel = if floor > 0.0 { (floor.ln() - ln).exp() } else { 0.0 };
            rel + floor_rel + 2.0 * F64_UNIT * ln.abs().max(1.0)
        };
        Eval { sign: v.sign(), ln, value, err_abs, err_log, terms }
    }

    fn linear(&self) -> BesselEval {
        BesselEval { value: self.value, err: self.err_abs }
    }

    fn log(&self) -> LogEval {
        LogEval { sign: self.sign, ln: self.ln, err: self.err_log }
    }
}

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::DomainError(format!("x = {x} must be finite and nonnegative")));
    }
    Ok(())
}

fn check_n(n: u32) -> Result<()> {
    if n > 1_000_000 {
        return Err(Error::DomainError(format!("order {n} exceeds 10^6")));
    }
    Ok(())
}

fn series_decreasing(n: u32, x: f64) -> bool {
    0.25 * x * x <= f64::from(n) + 1.0
}

fn j_series<R: Real>(n: u32, x: f64, max_terms: usize) -> Result<Eval> {
    let s = series::bessel_series::<R>(n, x, true, max_terms).ok_or(Error::NonConvergence {
        terms: max_terms,
        err: f64::INFINITY,
        target: 0.0,
    })?;
    let scale = s.scale.to_f64().abs();
    Ok(Eval::from_scaled(s.value, 0.0, s.err_rel * scale, s.terms))
}

fn j_orders_generic<R: Real>(orders: &[u32], x: f64, acc: &Accuracy, hankel_ok: bool) -> Result<Vec<Eval>> {
    if x == 0.0 {
        return Ok(orders.iter().map(|&n| Eval::exact(if n == 0 { 1.0 } else { 0.0 })).collect());
    }
    let mut out: Vec<Option<Eval>> = vec![None; orders.len()];
    let mut rec: Vec<(usize, usize)> = Vec::new();
    for (i, &n) in orders.iter().enumerate() {
        if hankel_ok && n <= 1 && x >= 25.0 {
            let h = hankel::hankel(n, x);
            let mut e = Eval::exact(h.j);
            e.err_abs = h.err;
            e.err_log = h.err / h.j.abs();
            out[i] = Some(e);
        } else if series_decreasing(n, x) {
            out[i] = Some(j_series::<R>(n, x, acc.max_terms)?);
        } else {
            rec.push((n as usize, i));
        }
    }
    if !rec.is_empty() {
        rec.sort_unstable();
        let wanted: Vec<usize> = rec.iter().map(|p| p.0).collect();
        let m = miller::bessel_j_miller::<R>(x, &wanted, acc.max_terms, acc.extended()).ok_or(Error::NonConvergence {
            terms: acc.max_terms,
            err: f64::INFINITY,
            target: acc.target_abs_err,
        })?;
        let terms = miller::start_order(x.max(*wanted.last().unwrap() as f64), acc.extended());
        for ((_, i), v) in rec.iter().zip(m) {
            out[*i] = Some(Eval::from_scaled(v.value, v.rel_err, v.abs_floor, terms));
        }
    }
    Ok(out.into_iter().map(|e| e.expect("every order evaluated")).collect())
}

fn j_orders(orders: &[u32], x: f64, acc: &Accuracy) -> Result<Vec<Eval>> {
    check_x(x)?;
    for &n in orders {
        check_n(n)?;
    }
    match acc.precision {
        Precision::Double => j_orders_generic::<f64>(orders, x, acc, true),
        Precision::Extended => j_orders_generic::<Dd>(orders, x, acc, false),
    }
}

fn budget(e: f64, target: f64, terms: usize) -> Result<()> {
    if e <= target {
        Ok(())
    } else {
        Err(Error::NonConvergence { terms, err: e, target })
    }
}

/// `J_n(x)` with `|value − J_n(x)| ≤ err ≤ acc.target_abs_err`.
pub fn bessel_j(n: u32, x: f64, acc: &Accuracy) -> Result<BesselEval> {
    let e = j_orders(&[n], x, acc)?[0];
    budget(e.err_abs, acc.target_abs_err, e.terms)?;
    Ok(e.linear())
}

/// `J_n(x)` and `J_{n+1}(x)` from a single evaluation pass.
pub fn bessel_j_pair(n: u32, x: f64, acc: &Accuracy) -> Result<(BesselEval, BesselEval)> {
    let v = j_orders(&[n, n + 1], x, acc)?;
    for e in &v {
        budget(e.err_abs, acc.target_abs_err, e.terms)?;
    }
    Ok((v[0].linear(), v[1].linear()))
}

/// `sign(J_n(x))` and `ln|J_n(x)|`; the budget applies to the logarithm.
pub fn log_abs_bessel_j(n: u32, x: f64, acc: &Accuracy) -> Result<LogEval> {
    let e = j_orders(&[n], x, acc)?[0];
    budget(e.err_log, acc.target_abs_err, e.terms)?;
    Ok(e.log())
}

/// Log-form `J_m(x)` for several orders sharing one recurrence sweep. Orders may
/// be given in any order; the result follows the input order.
pub fn log_abs_bessel_j_orders(orders: &[u32], x: f64, acc: &Accuracy) -> Result<Vec<LogEval>> {
    let mut idx: Vec<usize> = (0..orders.len()).collect();
    idx.sort_by_key(|&i| orders[i]);
    let sorted: Vec<u32> = idx.iter().map(|&i| orders[i]).collect();
    let v = j_orders(&sorted, x, acc)?;
    let mut out = vec![LogEval { sign: 0, ln: f64::NEG_INFINITY, err: 0.0 }; orders.len()];
    for (k, &i) in idx.iter().enumerate() {
        budget(v[k].err_log, acc.target_abs_err, v[k].terms)?;
        out[i] = v[k].log();
    }
    Ok(out)
}

/// `J_n(x)` by the ascending series alone, whatever the cancellation; the error
/// bound grows accordingly. No budget is enforced.
pub fn bessel_j_series(n: u32, x: f64, precision: Precision) -> Result<BesselEval> {
    check_x(x)?;
    check_n(n)?;
    let e = match precision {
        Precision::Double => j_series::<f64>(n, x, 1_000_000)?,
        Precision::Extended => j_series::<Dd>(n, x, 1_000_000)?,
    };
    Ok(e.linear())
}

/// `J_n(x)` by Miller's recurrence alone. No budget is enforced.
pub fn bessel_j_recurrence(n: u32, x: f64, precision: Precision) -> Result<BesselEval> {
    check_x(x)?;
    check_n(n)?;
    if x == 0.0 {
        return Ok(Eval::exact(if n == 0 { 1.0 } else { 0.0 }).linear());
    }
    let ext = precision == Precision::Extended;
    let v = match precision {
        Precision::Double => miller::bessel_j_miller::<f64>(x, &[n as usize], 4_000_000, ext)
            .map(|v| Eval::from_scaled(v[0].value, v[0].rel_err, v[0].abs_floor, 0)),
        Precision::Extended => miller::bessel_j_miller::<Dd>(x, &[n as usize], 4_000_000, ext)
            .map(|v| Eval::from_scaled(v[0].value, v[0].rel_err, v[0].abs_floor, 0)),
    };
    v.map(|e| e.linear()).ok_or(Error::NonConvergence { terms: 4_000_000, err: f64::INFINITY, target: 0.0 })
}

fn log_i_generic<R: Real>(n: u32, x: f64, max_terms: usize) -> Result<Eval> {
    let s = series::bessel_series::<R>(n, x, false, max_terms).ok_or(Error::NonConvergence {
        terms: max_terms,
        err: f64::INFINITY,
        target: 0.0,
    })?;
    Ok(Eval::from_scaled(s.value, s.err_rel, 0.0, s.terms))
}

fn log_i_eval(n: u32, x: f64, acc: &Accuracy) -> Result<Eval> {
    check_n(n)?;
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::DomainError(format!("log I_n needs x > 0, got {x}")));
    }
    match acc.precision {
        Precision::Double => log_i_generic::<f64>(n, x, acc.max_terms),
        Precision::Extended => log_i_generic::<Dd>(n, x, acc.max_terms),
    }
}

/// `ln I_n(x)` for `x > 0`; `err` bounds the error of the logarithm.
pub fn log_bessel_i(n: u32, x: f64, acc: &Accuracy) -> Result<BesselEval> {
    let e = log_i_eval(n, x, acc)?;
    budget(e.err_log, acc.target_abs_err, e.terms)?;
    Ok(BesselEval { value: e.ln, err: e.err_log })
}

/// `ln I_m(x)` for several orders by backward recurrence (independent of the series).
pub fn log_bessel_i_recurrence(orders: &[u32], x: f64, precision: Precision) -> Result<Vec<BesselEval>> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::DomainError(format!("log I_n needs x > 0, got {x}")));
    }
    let mut idx: Vec<usize> = (0..orders.len()).collect();
    idx.sort_by_key(|&i| orders[i]);
    let sorted: Vec<usize> = idx.iter().map(|&i| orders[i] as usize).collect();
    let ext = precision == Precision::Extended;
    let v = match precision {
        Precision::Double => miller::log_bessel_i_miller::<f64>(x, &sorted, 40_000_000, ext),
        Precision::Extended => miller::log_bessel_i_miller::<Dd>(x, &sorted, 40_000_000, ext),
    }
    .ok_or(Error::NonConvergence { terms: 40_000_000, err: f64::INFINITY, target: 0.0 })?;
    let mut out = vec![BesselEval { value: 0.0, err: 0.0 }; orders.len()];
    for (k, &i) in idx.iter().enumerate() {
        let (ln, rel) = v[k];
        out[i] = BesselEval { value: ln, err: rel + 2.0 * F64_UNIT * ln.abs().max(1.0) };
    }
    Ok(out)
}

/// `I_n(x)`; the budget is relative to `max(1, I_n(x))`.
pub fn bessel_i(n: u32, x: f64, acc: &Accuracy) -> Result<BesselEval> {
    check_x(x)?;
    check_n(n)?;
    if x == 0.0 {
        return Ok(BesselEval { value: if n == 0 { 1.0 } else { 0.0 }, err: 0.0 });
    }
    let e = log_i_eval(n, x, acc)?;
    if e.ln > 709.0 {
        return Err(Error::Overflow { log_value: e.ln });
    }
    let value = e.ln.exp();
    let err = value * e.err_log.exp_m1() + value * F64_UNIT;
    budget(err, acc.target_abs_err * value.max(1.0), e.terms)?;
    Ok(BesselEval { value, err })
}

/// `I_{n+1}(x) / I_n(x)` with an absolute error bound.
pub fn bessel_i_ratio(n: u32, x: f64, acc: &Accuracy) -> Result<BesselEval> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(BesselEval { value: 0.0, err: 0.0 });
    }
    let a = log_i_eval(n, x, acc)?;
    let b = log_i_eval(n + 1, x, acc)?;
    let value = (b.ln - a.ln).exp();
    let err = value * (a.err_log + b.err_log + 2.0 * F64_UNIT * b.ln.abs().max(1.0));
    budget(err, acc.target_abs_err, a.terms)?;
    Ok(BesselEval { value, err })
}

/// `J_n'(x) = −J_{n+1}(x) + (n/x) J_n(x)`.
pub fn bessel_deriv_j(n: u32, x: f64, acc: &Accuracy) -> Result<BesselEval> {
    check_x(x)?;
    if x == 0.0 {
        if n == 0 {
            return Ok(BesselEval { value: 0.0, err: 0.0 });
        }
        return Err(Error::DomainError("J_n' recurrence needs x > 0 for n ≥ 1".into()));
    }
    let (a, b) = bessel_j_pair(n, x, acc)?;
    let c = f64::from(n) / x;
    let value = -b.value + c * a.value;
    let err = b.err + c * a.err + 2.0 * F64_UNIT * (b.value.abs() + (c * a.value).abs());
    budget(err, acc.target_abs_err, 0)?;
    Ok(BesselEval { value, err })
}

/// `I_n'(x) = I_{n+1}(x) + (n/x) I_n(x)`; the budget is relative as for [`bessel_i`].
pub fn bessel_deriv_i(n: u32, x: f64, acc: &Accuracy) -> Result<BesselEval> {
    check_x(x)?;
    if x == 0.0 {
        if n == 0 {
            return Ok(BesselEval { value: 0.0, err: 0.0 });
        }
        return Err(Error::DomainError("I_n' recurrence needs x > 0 for n ≥ 1".into()));
    }
    let a = bessel_i(n, x, acc)?;
    let b = bessel_i(n + 1, x, acc)?;
    let c = f64::from(n) / x;
    let value = b.value + c * a.value;
    let err = b.err + c * a.err + 2.0 * F64_UNIT * value;
    budget(err, acc.target_abs_err * value.max(1.0), 0)?;
    Ok(BesselEval { value, err })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc() -> Accuracy {
        Accuracy::default()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0, &acc()).unwrap().value, 1.0);
        assert_eq!(bessel_j(4, 0.0, &acc()).unwrap().value, 0.0);
        assert_eq!(bessel_i(0, 0.0, &acc()).unwrap().value, 1.0);
        assert_eq!(bessel_i(3, 0.0, &acc()).unwrap().value, 0.0);
    }

    #[test]
    fn i0_at_one_against_direct_sum() {
        // Σ (1/2)^{2k} / (k!)² summed until the terms vanish.
        let mut term = 1.0f64;
        let mut oracle = 1.0;
        for k in 1..30 {
            term *= 0.25 / (k * k) as f64;
            oracle += term;
        }
        let v = bessel_i(0, 1.0, &acc()).unwrap();
        assert!((v.value - oracle).abs() < 1e-9);
        assert!((v.value - 1.2660658778).abs() < 1e-9);
        let l = log_bessel_i(0, 1.0, &acc()).unwrap();
        assert!((l.value - oracle.ln()).abs() < 1e-9);
    }

    #[test]
    fn log_i_domain() {
        assert!(matches!(log_bessel_i(0, 0.0, &acc()), Err(Error::DomainError(_))));
        assert!(matches!(log_bessel_i(0, -1.0, &acc()), Err(Error::DomainError(_))));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(bessel_i(0, 800.0, &acc()), Err(Error::Overflow { .. })));
        assert!(log_bessel_i(0, 800.0, &acc()).unwrap().value > 790.0);
    }

    #[test]
    fn derivative_recurrences() {
        let d = bessel_deriv_j(0, 1.0, &acc()).unwrap();
        let j1 = bessel_j(1, 1.0, &acc()).unwrap();
        assert_eq!(d.value, -j1.value);
        let x = 5.0;
        let ratio = bessel_deriv_i(0, x, &acc()).unwrap().value / bessel_i(0, x, &acc()).unwrap().value;
        assert!(ratio > 1.0 - 1.0 / x && ratio < 1.0);
        assert!(matches!(bessel_deriv_j(2, 0.0, &acc()), Err(Error::DomainError(_))));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let x = 3.8317059702;
        let h = 1e-5;
        let fd = (bessel_j(1, x + h, &acc()).unwrap().value - bessel_j(1, x - h, &acc()).unwrap().value) / (2.0 * h);
        assert!((bessel_deriv_j(1, x, &acc()).unwrap().value - fd).abs() < 1e-6);
    }

    #[test]
    fn extended_agrees_with_double() {
        let e = Accuracy::default().with_precision(Precision::Extended);
        for &(n, x) in &[(0u32, 3.0), (5, 20.0), (100, 100.0), (40, 10.0)] {
            let a = bessel_j(n, x, &acc()).unwrap();
            let b = bessel_j(n, x, &e).unwrap();
            assert!((a.value - b.value).abs() <= a.err + b.err, "n={n} x={x}");
            assert!(b.err <= a.err);
        }
        let a = log_bessel_i(7, 50.0, &acc()).unwrap();
        let b = log_bessel_i(7, 50.0, &e).unwrap();
        assert!((a.value - b.value).abs() <= a.err + b.err);
    }

    #[test]
    fn precision_parsing() {
        assert_eq!("Extended".parse::<Precision>().unwrap(), Precision::Extended);
        assert!("quad".parse::<Precision>().is_err());
    }

    #[test]
    fn orders_follow_input_order() {
        let v = log_abs_bessel_j_orders(&[300, 100, 200], 50.0, &acc()).unwrap();
        assert!(v[1].ln > v[2].ln && v[2].ln > v[0].ln);
    }
}
