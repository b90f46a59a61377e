//! Uniform (Debye) expansions of log J_n(n z), z < 1, and log I_n(n z).
//!
//! Used only to cross-check the series and recurrence paths at large order.

use std::f64::consts::PI;

fn u_polys(t: f64) -> [f64; 4] {
    let t2 = t * t;
    [
        1.0,
        t * (3.0 - 5.0 * t2) / 24.0,
        t2 * (81.0 - 462.0 * t2 + 385.0 * t2 * t2) / 1152.0,
        t * t2 * (30375.0 - 369603.0 * t2 + 765765.0 * t2 * t2 - 425425.0 * t2 * t2 * t2) / 414720.0,
    ]
}

/// `(log I_n(n z), size of last retained correction)`.
pub fn log_bessel_i_debye(n: u32, z: f64) -> (f64, f64) {
    let nf = f64::from(n);
    let s = (1.0 + z * z).sqrt();
    let eta = s + (z / (1.0 + s)).ln();
    let u = u_polys(1.0 / s);
    let corr = u[0] + u[1] / nf + u[2] / (nf * nf) + u[3] / (nf * nf * nf);
    let lead = nf * eta - 0.5 * (2.0 * PI * nf).ln() - 0.5 * s.ln();
    (lead + corr.ln(), (u[3] / (nf * nf * nf)).abs())
}

/// `(log J_n(n z), size of last retained correction)` for `0 < z < 1`.
pub fn log_bessel_j_debye(n: u32, z: f64) -> (f64, f64) {
    let nf = f64::from(n);
    let s = ((1.0 - z) * (1.0 + z)).sqrt();
    let eta = s + (z / (1.0 + s)).ln();
    let u = u_polys(1.0 / s);
    let corr = u[0] + u[1] / nf + u[2] / (nf * nf) + u[3] / (nf * nf * nf);
    let lead = nf * eta - 0.5 * (2.0 * PI * nf).ln() - 0.5 * s.ln();
    (lead + corr.ln(), (u[3] / (nf * nf * nf)).abs())
}
