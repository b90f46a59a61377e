//! CSV and human-readable renderings. CSV uses '.' decimals and '\n' endings.

use platevoid::audit::{AuditReport, CheckKind};
use platevoid::disk_spectrum::{NondegeneracyCertificate, PlateMode};
use platevoid::voidcert::VoidCertificate;
use std::fmt::Write;

pub fn modes_csv(modes: &[PlateMode]) -> String {
    let mut s = String::from("N,k,xi,lambda,plate_eig\n");
    for m in modes {
        let _ = writeln!(s, "{},{},{},{},{}", m.n, m.k, m.xi, m.lambda, m.plate_eig);
    }
    s
}

pub fn modes_pretty(modes: &[PlateMode]) -> String {
    let mut s = format!("{:>5} {:>3} {:>22} {:>24}\n", "N", "k", "xi", "xi^4");
    for m in modes {
        let _ = writeln!(s, "{:>5} {:>3} {:>22.15} {:>24.12e}", m.n, m.k, m.xi, m.plate_eig);
    }
    s
}

pub fn certificates_csv(certs: &[NondegeneracyCertificate]) -> String {
    let mut s = String::from("N,xi1,passed,dist_to_radial_zeros,w0_at_xi,j0_at_xi,gap\n");
    for c in certs {
        let _ = writeln!(s, "{},{},{},{},{},{},{}", c.n, c.xi1, c.passed, c.dist_to_radial_zeros, c.w0_at_xi, c.j0_at_xi, c.gap);
    }
    s
}

pub fn certificates_pretty(certs: &[NondegeneracyCertificate]) -> String {
    let mut s = String::new();
    if certs.is_empty() {
        s.push_str("no certificates\n");
    }
    for c in certs {
        let _ = writeln!(s, "N = {}: {}", c.n, if c.passed { "PASS" } else { "FAIL" });
        let _ = writeln!(s, "  xi = {:.15}", c.xi1);
        let _ = writeln!(s, "  distance to radial eigenvalues = {:.6}", c.dist_to_radial_zeros);
        let _ = writeln!(s, "  W_0(xi) = {:.6}, J_0(xi) = {:.6}", c.w0_at_xi, c.j0_at_xi);
        let _ = writeln!(s, "  gap = {:.6e} (gap / 4N^3 = {:.4})", c.gap, c.margins.gap_ratio);
        for f in c.failed_checks() {
            let _ = writeln!(s, "  failed: {f}");
        }
    }
    s
}

fn csv_field(t: &str) -> String {
    if t.contains([',', '"', '\n']) {
        format!("\"{}\"", t.replace('"', "\"\""))
    } else {
        t.to_string()
    }
}

pub fn reports_csv(reports: &[AuditReport]) -> String {
    let mut s = String::from("lemma,description,kind,value,relation,bound,margin,pass\n");
    for r in reports {
        for c in &r.checks {
            let kind = if c.kind == CheckKind::Required { "required" } else { "informational" };
            let _ = writeln!(
                s,
                "{},{},{kind},{},{},{},{},{}",
                csv_field(&r.lemma_id),
                csv_field(&c.description),
                c.value,
                c.relation.symbol(),
                c.bound,
                c.margin(),
                c.pass
            );
        }
    }
    s
}

pub fn void_csv(v: &VoidCertificate) -> String {
    let mut s = String::from("r,margin,ln_w_lower,ln_v_upper,agrees\n");
    for d in &v.direct {
        let _ = writeln!(s, "{},{},{},{},{}", d.r, d.margin, d.ln_w_lower, d.ln_v_upper, d.agrees);
    }
    s
}

pub fn void_pretty(v: &VoidCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "void certificate for N = {}: {}", v.n, if v.passed { "PASS" } else { "FAIL" });
    let _ = writeln!(s, "  xi          = {:.15}", v.xi);
    let _ = writeln!(s, "  K_N         = {:.6}", v.k_n);
    let _ = writeln!(s, "  t           = {:.6e} (ln t = {:.6})", v.t, v.ln_t);
    let _ = writeln!(s, "  r_inf       = {:.10}", v.r_infinity);
    let _ = writeln!(s, "  r_theorem   = {:.6e}", v.r_theorem);
    let _ = writeln!(s, "  r_sharper   = {:.6e}", v.r_sharper);
    let _ = writeln!(s, "  r_tangent   = {:.6e}", v.r_tangent);
    let _ = writeln!(s, "  r_certified = {:.6e} (margin {:.3e})", v.r_certified, v.margin_at_r);
    let _ = writeln!(s, "  r_direct    = {:.6e}", v.r_direct);
    let _ = writeln!(s, "  ln w_t(0) lower bound = {:.6}", v.ln_w0_lower);
    s.push_str(&v.checks.to_string());
    s
}
