use platevoid::disk_spectrum::{first_mode, scan_admissible};
use platevoid::envelopes::*;
use platevoid::specfun::Accuracy;
use platevoid::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn acc() -> Accuracy {
    Accuracy::default()
}

/// Ascending series in plain f64; fine for small arguments.
fn j_series(n: u32, x: f64) -> f64 {
    let mut term = (0..n).fold(1.0, |t, k| t * x / 2.0 / f64::from(k + 1));
    let mut sum = term;
    for k in 1..60 {
        term *= -(x * x / 4.0) / (f64::from(k) * f64::from(k + n));
        sum += term;
    }
    sum
}

#[test]
fn profile_endpoints() {
    assert_eq!(rho(1.0).unwrap(), 0.0);
    assert_eq!(rho(3.0).unwrap(), 0.0);
    assert!(rho(0.001).unwrap() < -6.0);
    assert!(rho(1e-300).unwrap() < -690.0);
    assert!(matches!(rho(0.0), Err(Error::DomainError(_))));
    assert!(matches!(rho_plus(0.0), Err(Error::DomainError(_))));
}

#[test]
fn profile_derivatives_match_finite_differences() {
    let h = 1e-6;
    for x in [0.1, 0.5, 0.9, 0.999] {
        let fd = (rho(x + h).unwrap() - rho(x - h).unwrap()) / (2.0 * h);
        assert!((fd - rho_deriv(x).unwrap()).abs() < 1e-8 * rho_deriv(x).unwrap().max(1.0), "x = {x}");
    }
    for t in [0.01, 0.5, 3.0, 50.0] {
        let fd = (rho_plus(t + h).unwrap() - rho_plus(t - h).unwrap()) / (2.0 * h);
        assert!((fd - rho_plus_deriv(t).unwrap()).abs() < 1e-6 * rho_plus_deriv(t).unwrap(), "t = {t}");
    }
}

#[test]
fn profile_matches_textbook_form_away_from_one() {
    for x in [0.05f64, 0.3, 0.7, 0.95] {
        let s = (1.0 - x * x).sqrt();
        let direct = x.ln() + s - (1.0 + s).ln();
        assert!((rho(x).unwrap() - direct).abs() < 1e-14);
    }
    for t in [0.01f64, 1.0, 7.0] {
        let s = (1.0 + t * t).sqrt();
        let direct = t.ln() + s - (1.0 + s).ln();
        assert!((rho_plus(t).unwrap() - direct).abs() < 1e-13);
    }
}

proptest! {
    #[test]
    fn rho_nondecreasing(a in 1e-6f64..1.5, b in 1e-6f64..1.5) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(rho(lo).unwrap() <= rho(hi).unwrap() + 1e-15);
    }

    #[test]
    fn rho_plus_increasing(a in 1e-6f64..100.0, d in 1e-6f64..10.0) {
        prop_assert!(rho_plus(a).unwrap() < rho_plus(a + d).unwrap());
    }
}

#[test]
fn j_sandwich_examples() {
    let a = acc();
    let m = check_lemma3_j(10, 0.5, &a).unwrap();
    assert!(m.lower >= 0.0 && m.upper >= 0.0);
    let m = check_lemma3_j(50, 0.99, &a).unwrap();
    assert!(m.upper >= 0.0);
    // Small-n worst case against an independent series.
    let m = check_lemma3_j(1, 0.1, &a).unwrap();
    let d = rho(0.1).unwrap() - j_series(1, 0.1).ln();
    assert!((m.lower - d).abs() < 1e-13);
    assert!(m.lower >= 0.0 && m.upper >= 0.0);
}

#[test]
fn i_containment_examples() {
    let a = acc();
    for (n, x) in [(1, 0.5), (10, 2.0), (100, 1.0)] {
        let v = check_lemma3_i(n, x, &a).unwrap();
        assert!(v.margins.lower > 0.0 && v.margins.upper > 0.0, "({n}, {x}): {v:?}");
    }
    // r(y) = ϱ₊(y) − ¼n⁻¹ln((n+1)/n + y²) − n⁻¹ln I_n(ny) = (½ln(2πn) − value)/n.
    let r: Vec<f64> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&y| (0.5 * (10.0 * PI).ln() - check_lemma3_i(5, y, &a).unwrap().value) / 5.0)
        .collect();
    assert!(r[0] < r[1] && r[1] < r[2]);
    assert!(check_lemma3_i(1, 3.0, &a).unwrap().margins.upper > 0.0);
}

#[test]
fn i0_decay_examples() {
    let a = acc();
    assert!(check_lemma3_i0(100.0, 0.5, &a).unwrap().0 > 0.0);
    assert!(check_lemma3_i0(400.0, 0.44, &a).unwrap().0 > 0.0);
    let near = check_lemma3_i0(100.0, 1.0 - 1e-9, &a).unwrap().0;
    assert!(near > 0.0 && near < 1e-8);
}

#[test]
fn sandwich_sweeps_on_default_grids() {
    let cfg = SweepConfig::default();
    let a = acc();
    for s in [sweep_lemma3_j(&cfg, &a).unwrap(), sweep_lemma3_i(&cfg, &a).unwrap(), sweep_lemma3_i0(&cfg, &a).unwrap()] {
        assert!(s.passed, "{s:?}");
        assert!(s.min_margin >= -1e-9, "{s:?}");
    }
    let s = sweep_rho_increment(40).unwrap();
    assert!(s.passed, "{s:?}");
}

#[test]
fn l2_lower_bounds_at_first_admissible() {
    let a = acc();
    let n = scan_admissible(100, 120, &a).unwrap()[0];
    let mode = first_mode(n, &a).unwrap();
    let r = lemma5_lower_bounds(&mode, &a).unwrap();
    assert!(r.ratio_j >= 1.0 && r.ratio_i >= 1.0, "{r:?}");
    assert!(r.half_measure_j >= r.intermediate_bound);
    assert!(r.quad_change_j <= 1e-8);
    assert!((r.half_measure_j / PI - r.lommel_j).abs() < 1e-10);
    assert!(lemma5_lower_bounds(&first_mode(20, &a).unwrap(), &a).is_err());
}

#[test]
fn envelope_formulas() {
    let n = 100u32;
    let nf = f64::from(n);
    let big = 1.0 - 1.0 / nf;
    // q = 1/2: 2√N · (1/2) · 4 = 4√N.
    let r = big * 0.5f64.powf(1.0 / nf);
    let w = remainder_envelope_wtail(n, r).unwrap();
    assert!((w - (4.0 * nf.sqrt()).ln()).abs() < 1e-12);
    assert!(matches!(remainder_envelope_wtail(n, big), Err(Error::DomainError(_))));
    let sl = nf + 2.0 * nf.cbrt();
    assert!((remainder_envelope_v1(n, sl, 0.99 * nf / sl).unwrap() - ((5.0 * nf).ln() + nf * rho(0.99).unwrap())).abs() < 1e-12);
    assert!((remainder_envelope_v1(n, sl, 0.98).unwrap() - (5.0 * nf).ln()).abs() < 1e-15);
    let v = remainder_envelope_vtail(n, 0.4).unwrap();
    let lq = nf * rho(0.4 / big).unwrap();
    assert!((v - ((10.0 * nf).ln() + 2.0 * lq - 2.0 * (1.0 - lq.exp()).ln())).abs() < 1e-12);
    assert!(remainder_envelope_v1(99, sl, 0.5).is_err());
    assert!(remainder_envelope_v1(n, nf, 0.5).is_err());
}

#[test]
fn remainder_oracles_small_run() {
    let a = acc();
    let mode = first_mode(105, &a).unwrap();
    let cfg = OracleConfig { trials: 200, pool_size: 512, ..OracleConfig::default() };
    let reps = lemma6_oracles(&mode, &cfg, &a).unwrap();
    assert_eq!(reps.len(), 4);
    for r in &reps {
        assert_eq!(r.points, 200 * 100);
        assert_eq!(r.violations, 0, "{r:?}");
    }
    assert_eq!(reps, lemma6_oracles(&mode, &cfg, &a).unwrap());
}

#[test]
fn single_term_oracle_by_direct_normalisation() {
    // Normalise a·J_N(√λ r)cos(Nθ) by an independent midpoint rule and compare
    // with the envelope pointwise.
    let a = acc();
    let mode = first_mode(105, &a).unwrap();
    let (n, sl) = (mode.n, mode.sqrt_lambda());
    let big = 1.0 - 1.0 / f64::from(n);
    let steps = 20_000;
    let h = big / f64::from(steps);
    let mut s = 0.0;
    for i in 0..steps {
        let r = (f64::from(i) + 0.5) * h;
        s += r * platevoid::specfun::bessel_j(n, sl * r, &a).unwrap().value.powi(2) * h;
    }
    let coef = 1.0 / (PI * s).sqrt();
    for i in 1..100 {
        let r = big * f64::from(i) / 100.0;
        let v = coef * platevoid::specfun::bessel_j(n, sl * r, &a).unwrap().value.abs();
        if v > 0.0 {
            assert!(v.ln() <= remainder_envelope_v1(n, sl, r).unwrap(), "r = {r}");
        }
    }
}
