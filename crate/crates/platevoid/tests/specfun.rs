use platevoid::specfun::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const GAMMA_TWO_THIRDS: f64 = 1.354_117_939_426_400_4;

fn acc() -> Accuracy {
    Accuracy::default()
}

fn rho_plus(t: f64) -> f64 {
    let s = (1.0 + t * t).sqrt();
    t.ln() + s - (1.0 + s).ln()
}

#[test]
fn wronskian_on_log_grid() {
    let a = acc();
    let mut worst = 0.0f64;
    for i in 0..=200 {
        let x = 10f64 * 1000f64.powf(i as f64 / 200.0);
        let j0 = bessel_j(0, x, &a).unwrap().value;
        let j1 = bessel_j(1, x, &a).unwrap().value;
        let y0 = bessel_y0(x, &a).unwrap().value;
        let y1 = bessel_y1(x, &a).unwrap().value;
        // J0 Y0' − J0' Y0 with Y0' = −Y1, J0' = −J1
        let w = -j0 * y1 + j1 * y0;
        worst = worst.max((w - 2.0 / (PI * x)).abs());
    }
    assert!(worst < 1e-10, "worst Wronskian defect {worst:e}");
}

#[test]
fn series_and_recurrence_agree_within_claimed_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..1000 {
        let n: u32 = rng.gen_range(0..300);
        let x: f64 = rng.gen_range(0.0..400.0);
        let s = bessel_j_series(n, x, Precision::Double);
        let r = bessel_j_recurrence(n, x, Precision::Double).unwrap();
        if let Ok(s) = s {
            if s.err.is_finite() {
                assert!((s.value - r.value).abs() <= s.err + r.err, "J_{n}({x}): {s:?} vs {r:?}");
            }
        }
        let d = bessel_j(n, x, &acc().with_target(1e-8)).unwrap();
        let e = bessel_j(n, x, &acc().with_target(1e-8).with_precision(Precision::Extended)).unwrap();
        assert!((d.value - e.value).abs() <= d.err + e.err, "J_{n}({x}) double vs extended");
        if x > 0.0 {
            let ls = log_bessel_i(n, x, &acc()).unwrap();
            let lr = log_bessel_i_recurrence(&[n], x, Precision::Double).unwrap()[0];
            assert!((ls.value - lr.value).abs() <= ls.err + lr.err, "ln I_{n}({x}): {ls:?} vs {lr:?}");
        }
    }
}

#[test]
fn extended_errors_are_small_and_honest() {
    let e = acc().with_precision(Precision::Extended);
    for &(n, x) in &[(3u32, 7.5), (120, 119.0), (250, 40.0), (0, 33.0)] {
        let a = bessel_j_recurrence(n, x, Precision::Extended).unwrap();
        let b = bessel_j_series(n, x, Precision::Extended).unwrap();
        assert!((a.value - b.value).abs() <= a.err + b.err);
        let c = bessel_j(n, x, &e).unwrap();
        assert!(c.err <= 1e-15 * c.value.abs().max(1e-3));
    }
}

#[test]
fn cauchy_bound_at_n_equals_x() {
    for n in [10u32, 100] {
        let nf = f64::from(n);
        let bound = 2f64.cbrt() / (9f64.cbrt() * GAMMA_TWO_THIRDS * nf.cbrt());
        let v = bessel_j(n, nf, &acc()).unwrap();
        assert!(v.value + v.err < bound, "n = {n}: {} vs {bound}", v.value);
    }
}

#[test]
fn log_i_inside_sandwich_at_ten() {
    let (n, x) = (10u32, 1.0);
    let nf = f64::from(n);
    let l = log_bessel_i(n, nf * x, &acc()).unwrap();
    let r = l.value - nf * rho_plus(x) + 0.25 * (1.0 + 1.0 / nf + x * x).ln() + 0.5 * (2.0 * PI * nf).ln();
    assert!(r > l.err && r < 1.0 / (6.0 * nf) - l.err, "r = {r}");
}

#[test]
fn j_zeros() {
    let a = acc();
    let z01 = bessel_j_zero(0, 1, &a).unwrap();
    assert!((2.40..2.41).contains(&z01));
    // Oracle: bisection on the plain series for J_1.
    let (mut lo, mut hi) = (3.0f64, 4.5f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if bessel_j_series(1, mid, Precision::Double).unwrap().value > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z11 = bessel_j_zero(1, 1, &a).unwrap();
    assert!((z11 - lo).abs() < 1e-9);
    assert!((z11 - 3.8317059702).abs() < 1e-9);
    let v = bessel_j(1, 3.8317059702, &a).unwrap();
    assert!(v.value.abs() < 1e-9);
    let (wl, wh) = lang_wong_window(100);
    let z = bessel_j_zero(100, 1, &a).unwrap();
    assert!(wl <= z && z <= wh);
}

#[test]
fn zeros_interlace() {
    let a = acc();
    let mut prev = bessel_j_zero(0, 1, &a).unwrap();
    for n in 1..=60 {
        let z = bessel_j_zero(n, 1, &a).unwrap();
        assert!(prev < z, "n = {n}");
        prev = z;
    }
    for n in [100u32, 250, 399] {
        assert!(bessel_j_zero(n, 1, &a).unwrap() < bessel_j_zero(n + 1, 1, &a).unwrap());
    }
}

#[test]
fn modulus_phase_examples() {
    let a = acc();
    let (m, _) = modulus_phase_0(20.0, &a).unwrap();
    assert!(m * m < 2.0 / (PI * 20.0));
    assert!(m * m > 2.0 / (PI * 20.0) * (1.0 - 1.0 / (8.0 * 400.0)));
    let (m, t) = modulus_phase_0(50.0, &a).unwrap();
    assert!((bessel_j(0, 50.0, &a).unwrap().value - m * t.cos()).abs() < 1e-8);
    let x = 30.0;
    let h = 1e-5;
    let dtheta = (modulus_phase_0(x + h, &a).unwrap().1 - modulus_phase_0(x - h, &a).unwrap().1) / (2.0 * h);
    let (m, _) = modulus_phase_0(x, &a).unwrap();
    assert!((m * m * dtheta - 2.0 / (PI * x)).abs() < 1e-6);
}

#[test]
fn debye_cross_check_at_large_order() {
    let a = acc();
    for &z in &[0.2, 0.5, 0.8, 0.95] {
        let n = 300u32;
        let (dj, tj) = log_bessel_j_debye(n, z);
        let lj = log_abs_bessel_j(n, f64::from(n) * z, &a).unwrap();
        assert_eq!(lj.sign, 1);
        assert!((lj.ln - dj).abs() < 10.0 * tj + 1e-10, "J z = {z}");
        let (di, ti) = log_bessel_i_debye(n, z);
        let li = log_bessel_i(n, f64::from(n) * z, &a).unwrap();
        assert!((li.value - di).abs() < 10.0 * ti + 1e-10, "I z = {z}");
    }
}

proptest! {
    #[test]
    fn log_i0_increments_below_argument_increments(a in 0.01f64..300.0, d in 1e-3f64..100.0) {
        let acc = Accuracy::default();
        let la = log_bessel_i(0, a, &acc).unwrap();
        let lb = log_bessel_i(0, a + d, &acc).unwrap();
        prop_assert!(lb.value - la.value < d + la.err + lb.err);
        prop_assert!(lb.value > la.value);
    }

    #[test]
    fn three_term_recurrence(n in 1u32..200, x in 0.5f64..250.0) {
        let acc = Accuracy::default();
        let jm = bessel_j(n - 1, x, &acc).unwrap();
        let j = bessel_j(n, x, &acc).unwrap();
        let jp = bessel_j(n + 1, x, &acc).unwrap();
        let c = 2.0 * f64::from(n) / x;
        let defect = (jm.value + jp.value - c * j.value).abs();
        prop_assert!(defect <= jm.err + jp.err + c * j.err + 1e-15 * (1.0 + c));
    }

    #[test]
    fn i_ratio_between_zero_and_one(n in 0u32..100, x in 0.01f64..500.0) {
        let r = bessel_i_ratio(n, x, &Accuracy::default()).unwrap();
        prop_assert!(r.value > 0.0 && r.value < 1.0);
    }
}
