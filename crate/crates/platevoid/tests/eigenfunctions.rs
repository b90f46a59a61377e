use platevoid::disk_spectrum::first_mode;
use platevoid::eigenfunctions::*;
use platevoid::quadrature::integrate;
use platevoid::specfun::{bessel_i, bessel_j, log_bessel_i, Accuracy};
use std::f64::consts::PI;

fn acc() -> Accuracy {
    Accuracy::default()
}

fn cos_mode(n: u32) -> DiskEigenfunction {
    DiskEigenfunction::new(first_mode(n, &acc()).unwrap(), Parity::Cos)
}

#[test]
fn normalisation_of_certified_modes() {
    for n in [105, 111, 117] {
        let v = l2_norm_sq(&cos_mode(n), 256, &acc()).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "N = {n}: {v}");
    }
    assert!((cos_mode(105).c.powi(2) - 1.0 / PI).abs() < 1e-16);
}

#[test]
fn norm_is_quadratic_in_coefficient_and_parity_blind() {
    let ef = cos_mode(30);
    let a = l2_norm_sq(&ef, 128, &acc()).unwrap();
    let b = l2_norm_sq(&ef.with_coefficient(2.0 * ef.c), 128, &acc()).unwrap();
    let s = l2_norm_sq(&DiskEigenfunction { parity: Parity::Sin, ..ef }, 128, &acc()).unwrap();
    assert!((b - 4.0 * a).abs() < 1e-12);
    assert!((s - a).abs() < 1e-14);
    assert!(l2_norm_sq(&ef, 32, &acc()).is_err());
}

#[test]
fn clamped_boundary_conditions() {
    let a = acc();
    let ef = cos_mode(100);
    for t in [0.0, 0.2, 1.0] {
        assert_eq!(eval_u(&ef, 1.0, t, &a).unwrap(), 0.0);
    }
    let h = 1e-6;
    let du = (eval_u(&ef, 1.0 + h, 0.0, &a).unwrap() - eval_u(&ef, 1.0 - h, 0.0, &a).unwrap()) / (2.0 * h);
    assert!(du.abs() < 1e-6, "du/dr = {du}");
    let t = PI / 200.0;
    assert!(eval_u(&ef, 0.7, t, &a).unwrap().abs() < 1e-15);
}

#[test]
fn components_recombine_and_vanish_at_centre() {
    let a = acc();
    let ef = cos_mode(100);
    let p = eval_components(&ef, 1.0, 0.3, &a).unwrap();
    assert_eq!(p.v_value(), p.w_value());
    assert_eq!(eval_components(&ef, 0.0, 0.3, &a).unwrap().v_value(), 0.0);
    for r in [0.3, 0.8, 0.95, 0.999] {
        let p = eval_components(&ef, r, 0.1, &a).unwrap();
        let u = eval_u(&ef, r, 0.1, &a).unwrap();
        assert_eq!(u, p.w_value() - p.v_value());
        // Closed forms: v = −c cos(Nθ) J_N(ξr)/J_N(ξ).
        let x = ef.mode.xi;
        let jv = -ef.c * (100.0f64 * 0.1).cos() * bessel_j(100, x * r, &a).unwrap().value / bessel_j(100, x, &a).unwrap().value;
        assert!((p.v_value() - jv).abs() < 1e-9 * jv.abs().max(1e-12));
    }
}

fn radial_residual(ef: &DiskEigenfunction, r: f64, h: f64, sign: f64, part: fn(&ComponentPair) -> f64) -> (f64, f64) {
    let a = acc();
    let f = |r: f64| part(&eval_components(ef, r, 0.0, &a).unwrap());
    let (fm, f0, fp) = (f(r - h), f(r), f(r + h));
    let n2 = f64::from(ef.mode.n).powi(2);
    let lap = (fp - 2.0 * f0 + fm) / (h * h) + (fp - fm) / (2.0 * h * r) - n2 * f0 / (r * r);
    (lap + sign * ef.mode.lambda * f0, ef.mode.lambda * f0.abs())
}

#[test]
fn helmholtz_and_screened_poisson_residuals() {
    let ef = cos_mode(100);
    let (res, _) = radial_residual(&ef, 0.5, 1e-3, 1.0, ComponentPair::v_value);
    assert!(res.abs() < 1e-4);
    let (res, scale) = radial_residual(&ef, 0.97, 1e-4, 1.0, ComponentPair::v_value);
    assert!(res.abs() < 1e-4 * scale, "{res} vs {scale}");
    let (res, scale) = radial_residual(&ef, 0.97, 1e-4, -1.0, ComponentPair::w_value);
    assert!(res.abs() < 1e-4 * scale, "{res} vs {scale}");
}

#[test]
fn boundary_laplacian_closed_form_and_stencil() {
    let a = acc();
    let ef = cos_mode(100);
    let lam = ef.mode.lambda;
    assert!(boundary_laplacian(&ef, PI / 200.0).abs() < 1e-9 * lam);
    assert!((boundary_laplacian(&ef, 0.0) + 2.0 * lam / PI.sqrt()).abs() < 1e-12 * lam);
    // At r = 1 the clamped conditions reduce Δu to u_rr.
    let h = 1e-4;
    let u = |r: f64| eval_u(&ef, r, 0.0, &a).unwrap();
    let fd = (u(1.0 + h) - 2.0 * u(1.0) + u(1.0 - h)) / (h * h);
    let exact = boundary_laplacian(&ef, 0.0);
    assert!((fd - exact).abs() < 1e-3 * exact.abs(), "{fd} vs {exact}");
    assert!((laplacian(&ef, 1.0, 0.0, &a).unwrap() - exact).abs() < 1e-9 * exact.abs());
}

#[test]
fn lommel_integral() {
    let a = acc();
    let n = 105;
    let x = first_mode(n, &a).unwrap().xi;
    for r in [0.3, 0.7, 1.0 - 1.0 / f64::from(n)] {
        let q = integrate(
            |s| Ok(s * bessel_j(0, x * s, &a)?.value.powi(2)),
            0.0,
            r,
            64,
            16,
            1e-14,
            1 << 20,
        )
        .unwrap();
        let j0 = bessel_j(0, x * r, &a).unwrap().value;
        let j1 = bessel_j(1, x * r, &a).unwrap().value;
        let closed = 0.5 * r * r * (j0 * j0 + j1 * j1);
        assert!((q.value - closed).abs() < 1e-8, "r = {r}");
    }
}

#[test]
fn i0_coefficient_round_trip() {
    let a = acc();
    let n = 105u32;
    let x = first_mode(n, &a).unwrap().xi;
    let radius = 1.0 - 1.0 / f64::from(n);
    let b = 0.7;
    // Add an N-harmonic that the angular average must remove.
    let f = |s: f64, t: f64| -> platevoid::Result<f64> {
        let i0 = bessel_i(0, x * s, &a)?.value;
        let ln_in = log_bessel_i(n, x * s, &a)?.value;
        Ok(b * i0 + 3.0 * ln_in.exp() * (f64::from(n) * t).cos())
    };
    let got = project_onto_i0(f, x, radius, 4 * n as usize, &a).unwrap();
    assert!((got - b).abs() < 1e-8 * b, "{got}");
}
