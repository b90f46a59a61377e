//! Gauss–Legendre quadrature with doubling-based convergence control.

use crate::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        // Tricomi's initial guess, then Newton on P_n.
        let k = i as f64 + 1.0;
        let theta = std::f64::consts::PI * (k - 0.25) / (nf + 0.5);
        let mut z = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Fixed rule on `[a, b]`.
pub fn integrate_fixed<F>(f: &mut F, a: f64, b: f64, n: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (b + a);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        s += wi * f(c + h * xi)?;
    }
    Ok(s * h)
}

/// Outcome of a doubling integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Converged {
    pub value: f64,
    /// Difference between the last two refinements.
    pub change: f64,
    pub points: usize,
}

/// Composite Gauss–Legendre over `panels` equal panels of `[a, b]`, doubling the
/// per-panel order from `start` until two successive results agree to `tol`
/// (absolute, or relative to the value when it exceeds one).
pub fn integrate<F>(mut f: F, a: f64, b: f64, panels: usize, start: usize, tol: f64, max_points: usize) -> Result<Converged>
where
    F: FnMut(f64) -> Result<f64>,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let eval = |f: &mut F, n: usize| -> Result<f64> {
        let mut s = 0.0;
        for p in 0..panels {
            let lo = a + h * p as f64;
            s += integrate_fixed(f, lo, lo + h, n)?;
        }
        Ok(s)
    };
    let mut n = start.max(2);
    let mut prev = eval(&mut f, n)?;
    loop {
        let next_n = 2 * n;
        if next_n * panels > max_points {
            return Err(Error::QuadratureUnconverged { change: f64::NAN, points: n * panels });
        }
        let cur = eval(&mut f, next_n)?;
        let change = (cur - prev).abs();
        if change <= tol * cur.abs().max(1.0) {
            return Ok(Converged { value: cur, change, points: next_n * panels });
        }
        if next_n * 2 * panels > max_points {
            return Err(Error::QuadratureUnconverged { change, points: next_n * panels });
        }
        prev = cur;
        n = next_n;
    }
}

/// Trapezoid rule on a full period with `n` points; exact for trigonometric
/// polynomials of degree below `n`.
pub fn periodic_trapezoid<F: FnMut(f64) -> f64>(mut f: F, n: usize) -> f64 {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).map(|i| f(h * i as f64)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 64, 257] {
            let (_, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let v = integrate_fixed(&mut |x: f64| Ok(x.powi(9) + 3.0 * x.powi(4)), 0.0, 1.0, 5).unwrap();
        assert!((v - (0.1 + 0.6)).abs() < 1e-15);
    }

    #[test]
    fn doubling_converges_on_oscillatory() {
        let c = integrate(|x: f64| Ok((40.0 * x).cos()), 0.0, 1.0, 4, 16, 1e-13, 1 << 16).unwrap();
        assert!((c.value - (40f64).sin() / 40.0).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_trig_exact() {
        let v = periodic_trapezoid(|t| (3.0 * t).cos().powi(2), 64);
        assert!((v - std::f64::consts::PI).abs() < 1e-13);
    }
}
