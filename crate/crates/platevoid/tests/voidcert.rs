use platevoid::disk_spectrum::{certify_nondegenerate, scan_admissible};
use platevoid::envelopes::rho;
use platevoid::specfun::Accuracy;
use platevoid::voidcert::*;
use platevoid::Error;
use std::f64::consts::LN_10;

fn acc() -> Accuracy {
    Accuracy::default()
}

#[test]
fn r_infinity_value_and_residual() {
    let r = solve_r_infinity(1e-10).unwrap();
    assert!((r - 0.44367).abs() < 1e-5, "{r}");
    let s = (1.0 - r * r).sqrt();
    assert!((r.ln() + s - (1.0 + s).ln() - r + 1.0).abs() <= 1e-10);
    assert!(matches!(solve_r_infinity(0.0), Err(Error::DomainError(_))));
}

#[test]
fn both_radius_equations_agree() {
    let r = solve_r_infinity(1e-13).unwrap();
    let z = solve_zeta_infinity(1e-13).unwrap();
    assert!((r - z).abs() < 1e-10);
    assert!((rho(z).unwrap() - z + 1.0).abs() < 1e-12);
}

#[test]
fn root_is_stable_under_tolerance_refinement() {
    let mut tol = 1e-4;
    let mut prev = solve_r_infinity(tol).unwrap();
    while tol > 1e-14 {
        let next = solve_r_infinity(tol / 2.0).unwrap();
        assert!((next - prev).abs() < tol, "tol = {tol}");
        prev = next;
        tol /= 2.0;
    }
}

#[test]
fn sigma_and_tangent_line() {
    let s = sigma().unwrap();
    assert!((s - 0.452).abs() < 1e-3, "{s}");
    let rep = sigma_and_tangent_bound(10_000).unwrap();
    assert!(rep.passed, "{rep}");
    // Direct evaluation away from the tangency point.
    let z = solve_zeta_infinity(1e-14).unwrap();
    for x in [0.2f64, 0.9] {
        let direct = x.ln() + (1.0 - x * x).sqrt() - (1.0 + (1.0 - x * x).sqrt()).ln() - x + 1.0;
        assert!(s * (x / z).ln() > direct);
    }
}

#[test]
fn theorem_radius_limits_and_fixture() {
    let r_inf = solve_r_infinity(1e-14).unwrap();
    let far = theorem_radius(100_000_000, 0.0).unwrap();
    assert!((far.closed - r_inf).abs() < 1e-3);
    // Direct evaluation of the closed form at N = 400.
    let n = 400f64;
    let expect = r_inf * (-4.0 * n.powf(-2.0 / 3.0) - (500.0 + 50.0 * n.ln()) / n).exp();
    let got = theorem_radius(400, default_kn(400).unwrap()).unwrap();
    assert!((got.closed - expect).abs() < 1e-15);
    assert!((got.closed - 5.583880020997494e-2).abs() < 1e-12, "{}", got.closed);
    assert!(got.sharper >= got.closed);
    let mut prev = 0.0;
    for n in [100u32, 200, 400, 1000, 10_000, 1_000_000] {
        let r = theorem_radius(n, 0.0).unwrap().closed;
        assert!(r > prev && r < r_inf);
        prev = r;
    }
}

#[test]
fn kn_slack_is_enforced() {
    let k = default_kn(105).unwrap();
    assert!(theorem_radius(105, k).is_ok());
    assert!(matches!(theorem_radius(105, 2.0 * k), Err(Error::KnTooLarge { n: 105, .. })));
    assert!(theorem_radius(99, 0.0).is_err());
    assert!(theorem_radius(105, -1.0).is_err());
    // Larger K_N only shrinks the sharper radius.
    assert!(theorem_radius(105, 0.0).unwrap().sharper >= theorem_radius(105, k).unwrap().sharper);
}

#[test]
fn positivity_examples() {
    let a = acc();
    let c = certify_nondegenerate(105, &a).unwrap();
    let k = default_kn(105).unwrap();
    assert!(positivity_condition(105, c.xi1, 1e-30, k).unwrap() > 50.0);
    let rt = theorem_radius(105, k).unwrap().closed;
    assert!(positivity_condition(105, c.xi1, rt, k).unwrap() >= 0.0);
    // Independent evaluation of the margin.
    let (n, xi, r) = (105f64, c.xi1, 0.01);
    let x = xi * r / n;
    let s = (1.0 - x * x).sqrt();
    let direct = xi / n * (r - 1.0) - (87.0 * LN_10 + (22.0 + 2.0 * k) * n.ln()) / n - (x.ln() + s - (1.0 + s).ln());
    assert!((positivity_condition(105, xi, r, k).unwrap() - direct).abs() < 1e-12);
    assert!(positivity_condition(105, xi, 0.0, k).is_err());
    assert!(positivity_condition(105, xi, 0.995, k).is_err());

    // N = 200 with ξ in the middle of its window.
    let xi200 = 200.0 + 2.0 * 200f64.cbrt();
    assert!(positivity_condition(200, xi200, 0.6, default_kn(200).unwrap()).unwrap() < 0.0);
}

#[test]
fn margin_decreases_below_the_inflection() {
    let a = acc();
    let c = certify_nondegenerate(105, &a).unwrap();
    let k = default_kn(105).unwrap();
    let hi = 105.0 / (2f64.sqrt() * c.xi1);
    let mut prev = f64::INFINITY;
    for i in 1..=2000 {
        let r = hi * f64::from(i) / 2000.0;
        let m = positivity_condition(105, c.xi1, r, k).unwrap();
        assert!(m < prev, "r = {r}");
        prev = m;
    }
}

#[test]
fn void_certificate_at_first_admissible() {
    let a = acc();
    let n = scan_admissible(100, 120, &a).unwrap()[0];
    assert_eq!(n, 105);
    let v = certify_void(n, &a).unwrap();
    assert!(v.passed, "{}", v.checks);
    assert!(v.r_certified >= v.r_theorem && v.r_certified < v.r_infinity);
    assert!((v.r_certified - 0.0125).abs() < 5e-4, "{}", v.r_certified);
    assert_eq!(v.direct.len(), 32);
    assert!(v.direct.iter().all(|d| d.agrees && d.margin > 0.0 && d.ln_w_lower > d.ln_v_upper));
    assert!(v.margin_at_r >= 0.0 && v.margin_at_r < 1e-3);
    assert!(v.r_tangent <= v.r_certified + 1e-6);
    assert!(v.ln_w0_lower.is_finite() && v.w0_margin >= 1.0);
    assert!((v.ln_t - (-43.0 * LN_10 - (11.5 + v.k_n) * 105f64.ln())).abs() < 1e-12);
    let json = serde_json::to_value(&v).unwrap();
    assert_eq!(json["N"], 105);
    assert!(json["K_N"].is_number());
}

#[test]
fn void_certificate_rejects_uncertified_n() {
    let a = acc();
    assert!(matches!(certify_void(106, &a), Err(Error::CertificationFailed(_))));
    let cfg = VoidConfig { k_n: Some(100.0), ..VoidConfig::default() };
    assert!(matches!(certify_void_with(105, &cfg, &a), Err(Error::KnTooLarge { .. })));
}

#[test]
fn radii_increase_along_the_scan_list() {
    let a = acc();
    let r_inf = solve_r_infinity(1e-14).unwrap();
    let mut prev = 0.0;
    for n in scan_admissible(100, 400, &a).unwrap() {
        let c = certify_nondegenerate(n, &a).unwrap();
        let k = default_kn(n).unwrap();
        let rt = theorem_radius(n, k).unwrap().closed;
        assert!(rt > prev, "N = {n}");
        prev = rt;
        let hi = f64::from(n) / (2f64.sqrt() * c.xi1);
        let rc = platevoid::roots::bisect(|r| positivity_condition(n, c.xi1, r, k), 1e-12, hi, 1e-9).unwrap().lo;
        assert!(rt < rc && rc < r_inf, "N = {n}: {rt} {rc}");
    }
}
