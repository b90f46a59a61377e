//! `platevoid`: spectra, nondegeneracy certificates, constant audits, void
//! certificates and eigenfunction grid export.

mod config;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{OutputFormat, RunConfig};
use platevoid::audit::AuditReport;
use platevoid::disk_spectrum::{certify_nondegenerate, plate_mode, radial_modes, scan_admissible, scan_certificates, NondegeneracyCertificate};
use platevoid::eigenfunctions::{eval_grid, write_grid_csv, DiskEigenfunction, Parity};
use platevoid::envelopes::{audit_lemma3, audit_lemma5, audit_lemma6};
use platevoid::perturbation::{
    audit_lemma10_jacobians, audit_lemma11_constants, audit_lemma7_bootstrap, audit_lemma8_constants,
    audit_section6_simplifications, audit_shape_derivatives, RampSpec,
};
use platevoid::specfun::{Accuracy, Precision};
use platevoid::voidcert::{certify_void_with, sigma_and_tangent_bound};
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "platevoid", version, about = "Clamped-plate eigenmodes of the disk and nodal-void certificates")]
struct Cli {
    /// `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["double", "extended"])]
    precision: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Extra `key=value` setting, as in the config file. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    settings: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Clamped-plate eigenvalues `ξ_{N,k}`.
    Spectrum(SpectrumArgs),
    /// Nondegeneracy certificates for one `N` or a range.
    Certify(CertifyArgs),
    /// Run one constant or inequality audit.
    Audit(AuditArgs),
    /// Certify the nodal-free radius for one `N`.
    Void(VoidArgs),
    /// Export `u`, `v`, `w` on a polar grid as CSV.
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long, required_unless_present = "radial")]
    n: Option<u32>,
    #[arg(long, default_value_t = 1)]
    count: u32,
    /// Radially symmetric modes (`N = 0`).
    #[arg(long, conflicts_with = "n")]
    radial: bool,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CertifyArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, num_args = 2, value_names = ["FROM", "TO"])]
    scan: Option<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
enum Lemma {
    #[value(name = "3")]
    L3,
    #[value(name = "5")]
    L5,
    #[value(name = "6")]
    L6,
    #[value(name = "7")]
    L7,
    #[value(name = "8")]
    L8,
    #[value(name = "10")]
    L10,
    #[value(name = "11")]
    L11,
    #[value(name = "sec6")]
    Sec6,
    #[value(name = "tangent")]
    Tangent,
    #[value(name = "sigma")]
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RampKind {
    Quadratic,
    Smooth,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[arg(long, value_enum)]
    lemma: Lemma,
    /// Mode index; defaults to the first admissible `N` (10 and 100 for the Jacobian audit).
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum)]
    ramp: Option<RampKind>,
    /// Lower end of the ramp transition in `|x|^{2N}`.
    #[arg(long)]
    ramp_lo: Option<f64>,
    #[arg(long)]
    ramp_edge: Option<f64>,
}

#[derive(Args, Debug)]
struct VoidArgs {
    #[arg(long)]
    n: u32,
    /// Slack exponent `K_N`; defaults to the largest admissible value.
    #[arg(long)]
    kn: Option<f64>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    n: u32,
    /// Number of radii `i/(M−1)`, `i = 0..M`.
    #[arg(long, default_value_t = 65)]
    r_grid: usize,
    /// Number of angles `2πj/K`.
    #[arg(long, default_value_t = 64)]
    theta_grid: usize,
    #[arg(long, value_enum, default_value = "cos")]
    parity: ParityArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParityArg {
    Cos,
    Sin,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(platevoid::Error),
    Io(std::io::Error),
    /// A certificate or audit ran and did not pass.
    Failed(String),
}

impl From<platevoid::Error> for CliError {
    fn from(e: platevoid::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Failed(_) => 1,
            CliError::Lib(e) if e.is_certification() || matches!(e, platevoid::Error::KnTooLarge { .. }) => 1,
            CliError::Lib(_) | CliError::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn resolve_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &cli.config {
        cfg.apply_file(p).map_err(CliError::Usage)?;
    }
    if let Some(p) = Precision::from_env().map_err(|e| CliError::Usage(format!("{}: {e}", platevoid::specfun::PRECISION_ENV)))? {
        cfg.precision = p;
    }
    if let Some(p) = &cli.precision {
        cfg.set("precision", p).map_err(CliError::Usage)?;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = cli.output {
        cfg.output = o;
    }
    if let Some(p) = &cli.out {
        cfg.out_path = Some(p.clone());
    }
    for s in &cli.settings {
        let (k, v) = s.split_once('=').ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {s:?}")))?;
        cfg.set(k.trim(), v.trim()).map_err(CliError::Usage)?;
    }
    if let Command::Audit(a) = &cli.command {
        if let Some(kind) = a.ramp {
            cfg.set("ramp", if kind == RampKind::Smooth { "smooth" } else { "quadratic" }).map_err(CliError::Usage)?;
        }
        if let Some(lo) = a.ramp_lo {
            cfg.set("ramp_lo", &lo.to_string()).map_err(CliError::Usage)?;
        }
        if let Some(e) = a.ramp_edge {
            cfg.set("ramp_edge", &e.to_string()).map_err(CliError::Usage)?;
        }
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    seed: u64,
    config: &'a RunConfig,
    result: T,
}

/// Where the rendered output goes.
fn emit(cfg: &RunConfig, text: &str) -> CliResult<()> {
    match &cfg.out_path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(cfg: &RunConfig, command: &str, result: T) -> String {
    let env = Envelope { schema: SCHEMA, command, seed: cfg.seed, config: cfg, result };
    // Plain data; serialization cannot fail.
    let mut s = serde_json::to_string_pretty(&env).expect("serializable output");
    s.push('\n');
    s
}

fn first_admissible(acc: &Accuracy) -> CliResult<u32> {
    let mut from = 100;
    while from <= 400 {
        if let Some(&n) = scan_admissible(from, from + 19, acc)?.first() {
            return Ok(n);
        }
        from += 20;
    }
    Err(CliError::Failed("no admissible N in [100, 400]".into()))
}

fn passed_certificate(n: u32, acc: &Accuracy) -> CliResult<NondegeneracyCertificate> {
    let c = certify_nondegenerate(n, acc)?;
    if !c.passed {
        return Err(CliError::Lib(platevoid::Error::NondegeneracyRequired(n)));
    }
    Ok(c)
}

fn cmd_spectrum(cfg: &RunConfig, a: &SpectrumArgs) -> CliResult<()> {
    let acc = cfg.accuracy();
    if a.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let modes = if a.radial {
        radial_modes(a.count, &acc)?
    } else {
        let n = a.n.ok_or_else(|| CliError::Usage("--n or --radial is required".into()))?;
        (1..=a.count).map(|k| plate_mode(n, k, &acc)).collect::<Result<Vec<_>, _>>()?
    };
    let text = match cfg.output {
        OutputFormat::Json => to_json(cfg, "spectrum", &modes),
        OutputFormat::Csv => render::modes_csv(&modes),
        OutputFormat::Pretty => render::modes_pretty(&modes),
    };
    emit(cfg, &text)
}

fn cmd_certify(cfg: &RunConfig, a: &CertifyArgs) -> CliResult<()> {
    let acc = cfg.accuracy();
    let (certs, single) = match (&a.n, &a.scan) {
        (Some(n), _) => (vec![certify_nondegenerate(*n, &acc)?], true),
        (None, Some(range)) => {
            let all = scan_certificates(range[0], range[1], &acc)?;
            (all.into_iter().filter(|c| c.passed).collect(), false)
        }
        (None, None) => return Err(CliError::Usage("--n or --scan is required".into())),
    };
    let text = match (cfg.output, single) {
        (OutputFormat::Json, true) => to_json(cfg, "certify", &certs[0]),
        (OutputFormat::Json, false) => to_json(cfg, "certify", &certs),
        (OutputFormat::Csv, _) => render::certificates_csv(&certs),
        (OutputFormat::Pretty, _) => render::certificates_pretty(&certs),
    };
    emit(cfg, &text)?;
    if single && !certs[0].passed {
        let c = &certs[0];
        return Err(CliError::Failed(format!("N = {} is not nondegenerate; failed: {}", c.n, c.failed_checks().join("; "))));
    }
    Ok(())
}

fn run_audit(cfg: &RunConfig, a: &AuditArgs) -> CliResult<Vec<AuditReport>> {
    let acc = cfg.accuracy();
    let g = &cfg.grids;
    let admissible = || -> CliResult<u32> {
        match a.n {
            Some(n) => Ok(n),
            None => first_admissible(&acc),
        }
    };
    Ok(match a.lemma {
        Lemma::L3 => vec![audit_lemma3(&cfg.sweep(), &acc)?],
        Lemma::L5 => vec![audit_lemma5(&passed_certificate(admissible()?, &acc)?.mode(), &acc)?],
        Lemma::L6 => vec![audit_lemma6(&passed_certificate(admissible()?, &acc)?.mode(), &cfg.oracle(), &acc)?],
        Lemma::L7 => vec![audit_lemma7_bootstrap()],
        Lemma::L8 => vec![audit_lemma8_constants(g.lemma8_grid)],
        Lemma::L10 => {
            let ns = match a.n {
                Some(n) => vec![n],
                None => vec![10, 100],
            };
            let spec: RampSpec = cfg.ramp;
            ns.into_iter().map(|n| audit_lemma10_jacobians(n, spec, &cfg.jacobian_grid())).collect::<Result<_, _>>()?
        }
        Lemma::L11 => vec![audit_lemma11_constants(&passed_certificate(admissible()?, &acc)?, &acc)?.0],
        Lemma::Sec6 => vec![audit_section6_simplifications(&passed_certificate(admissible()?, &acc)?, g.sec6_grid)?],
        Lemma::Tangent => vec![audit_shape_derivatives(&passed_certificate(admissible()?, &acc)?, &acc)?],
        Lemma::Sigma => vec![sigma_and_tangent_bound(g.sigma_grid)?],
    })
}

fn cmd_audit(cfg: &RunConfig, a: &AuditArgs) -> CliResult<()> {
    let reports = run_audit(cfg, a)?;
    let text = match cfg.output {
        OutputFormat::Json => to_json(cfg, "audit", &reports),
        OutputFormat::Csv => render::reports_csv(&reports),
        OutputFormat::Pretty => reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"),
    };
    emit(cfg, &text)?;
    if let Some(r) = reports.iter().find(|r| !r.passed) {
        let c = r.first_failure().map(|c| c.description.clone()).unwrap_or_default();
        return Err(CliError::Failed(format!("audit {} failed: {c}", r.lemma_id)));
    }
    Ok(())
}

fn cmd_void(cfg: &RunConfig, a: &VoidArgs) -> CliResult<()> {
    let acc = cfg.accuracy();
    let v = certify_void_with(a.n, &cfg.void(a.kn), &acc)?;
    let text = match cfg.output {
        OutputFormat::Json => to_json(cfg, "void", &v),
        OutputFormat::Csv => render::void_csv(&v),
        OutputFormat::Pretty => render::void_pretty(&v),
    };
    emit(cfg, &text)
}

#[derive(Serialize)]
struct EvalSummary {
    csv: PathBuf,
    rows: usize,
    /// Largest `|u|` on the unit circle; the clamped condition makes it zero.
    max_abs_u_on_boundary: f64,
}

fn cmd_eval(cfg: &RunConfig, a: &EvalArgs) -> CliResult<()> {
    let path = cfg.out_path.clone().ok_or_else(|| CliError::Usage("eval needs --out FILE".into()))?;
    if a.r_grid < 2 || a.theta_grid < 1 || a.n == 0 {
        return Err(CliError::Usage("eval needs --n ≥ 1, --r-grid ≥ 2 and --theta-grid ≥ 1".into()));
    }
    let acc = cfg.accuracy();
    let mode = plate_mode(a.n, 1, &acc)?;
    let parity = match a.parity {
        ParityArg::Cos => Parity::Cos,
        ParityArg::Sin => Parity::Sin,
    };
    let ef = DiskEigenfunction::new(mode, parity);
    let rs: Vec<f64> = (0..a.r_grid).map(|i| i as f64 / (a.r_grid - 1) as f64).collect();
    let thetas: Vec<f64> = (0..a.theta_grid).map(|j| 2.0 * PI * j as f64 / a.theta_grid as f64).collect();
    let rows = eval_grid(&ef, &rs, &thetas, &acc)?;
    let mut buf = Vec::new();
    write_grid_csv(&rows, &mut buf)?;
    std::fs::write(&path, buf)?;
    let summary = EvalSummary {
        csv: path.clone(),
        rows: rows.len(),
        max_abs_u_on_boundary: rows.iter().filter(|g| g.r == 1.0).map(|g| g.u.abs()).fold(0.0, f64::max),
    };
    // The CSV keeps its fixed header; the resolved config goes in a sidecar.
    let meta = to_json(cfg, "eval", &summary);
    let mut side = path.into_os_string();
    side.push(".json");
    std::fs::write(&side, &meta)?;
    let mut out = std::io::stdout().lock();
    out.write_all(meta.as_bytes())?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    let cfg = resolve_config(cli)?;
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(&cfg, a),
        Command::Certify(a) => {
            if let Some(r) = &a.scan {
                if r[0] > r[1] {
                    return Err(CliError::Usage("--scan FROM TO needs FROM ≤ TO".into()));
                }
            }
            cmd_certify(&cfg, a)
        }
        Command::Audit(a) => cmd_audit(&cfg, a),
        Command::Void(a) => cmd_void(&cfg, a),
        Command::Eval(a) => cmd_eval(&cfg, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("platevoid: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
