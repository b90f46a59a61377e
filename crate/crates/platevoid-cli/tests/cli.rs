use platevoid::eigenfunctions::{read_grid_csv, CSV_HEADER};
use serde_json::Value;
use std::io::{BufReader, Write};
use std::process::{Command, Output};

fn platevoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_platevoid"))
        .args(args)
        .env_remove("PLATE_VOID_PRECISION")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn spectrum_single_mode_in_window() {
    let out = platevoid(&["spectrum", "--n", "100", "--count", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "spectrum");
    assert!(v["seed"].is_u64());
    assert_eq!(v["config"]["precision"], "double");
    let modes = v["result"].as_array().unwrap();
    assert_eq!(modes.len(), 1);
    let xi = modes[0]["xi"].as_f64().unwrap();
    assert!(xi > 104.64 && xi < 113.92, "{xi}");
}

#[test]
fn radial_spectrum_increases() {
    let v = json(&platevoid(&["spectrum", "--radial", "--count", "5"]));
    let xs: Vec<f64> = v["result"].as_array().unwrap().iter().map(|m| m["xi"].as_f64().unwrap()).collect();
    assert_eq!(xs.len(), 5);
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn usage_errors_exit_64() {
    let out = platevoid(&["spectrum", "--bogus"]);
    assert_eq!(code(&out), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(code(&platevoid(&["spectrum"])), 64);
    assert_eq!(code(&platevoid(&["audit", "--lemma", "4"])), 64);
    assert_eq!(code(&platevoid(&["certify", "--n", "105", "--scan", "100", "110"])), 64);
    assert_eq!(code(&platevoid(&["spectrum", "--n", "5", "--set", "nonsense=1"])), 64);
    assert_eq!(code(&platevoid(&["--help"])), 0);
}

#[test]
fn failing_certificate_exits_1_with_diagnostics() {
    let out = platevoid(&["certify", "--n", "100"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["result"]["passed"], false);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("distance to radial eigenvalues") && err.contains("spectral gap"), "{err}");
}

#[test]
fn scan_is_deterministic() {
    let a = platevoid(&["certify", "--scan", "100", "112"]);
    let b = platevoid(&["certify", "--scan", "100", "112"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let ns: Vec<u64> = json(&a)["result"].as_array().unwrap().iter().map(|c| c["N"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![105, 111]);
    let empty = json(&platevoid(&["certify", "--scan", "100", "104"]));
    assert_eq!(empty["result"].as_array().unwrap().len(), 0);
}

#[test]
fn bootstrap_audit_locates_fixed_point() {
    let out = platevoid(&["audit", "--lemma", "7"]);
    assert_eq!(code(&out), 0);
    let checks = json(&out)["result"][0]["checks"].as_array().unwrap().clone();
    let y = checks.iter().find(|c| c["description"] == "y_inf > 1").unwrap()["value"].as_f64().unwrap();
    assert!(y > 1.0 && y < 2.0);
}

#[test]
fn steep_ramp_fails_the_jacobian_audit() {
    let out = platevoid(&["audit", "--lemma", "10", "--n", "10", "--ramp-lo", "0.9"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("derivative budget"));
}

#[test]
fn audit_csv_lists_every_check() {
    let out = platevoid(&["audit", "--lemma", "8", "--output", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "lemma,description,kind,value,relation,bound,margin,pass");
    assert!(lines.count() > 5);
}

#[test]
fn void_certificate_and_kn_override() {
    let out = platevoid(&["void", "--n", "105"]);
    assert_eq!(code(&out), 0);
    let v = json(&out)["result"].clone();
    assert!(v["r_certified"].as_f64().unwrap() >= v["r_theorem"].as_f64().unwrap());
    assert_eq!(v["passed"], true);
    let z = json(&platevoid(&["void", "--n", "105", "--kn", "0"]))["result"].clone();
    assert!(z["r_theorem"].as_f64().unwrap() >= v["r_theorem"].as_f64().unwrap());
    assert!(z["r_sharper"].as_f64().unwrap() > v["r_sharper"].as_f64().unwrap());
    assert_eq!(z["K_N"], 0.0);
}

#[test]
fn void_rejects_uncertified_n() {
    let out = platevoid(&["void", "--n", "106"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("distance to radial eigenvalues"));
    assert_eq!(code(&platevoid(&["void", "--n", "105", "--kn", "50"])), 1);
}

#[test]
fn eval_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let p = path.to_str().unwrap();
    let out = platevoid(&["eval", "--n", "105", "--r-grid", "11", "--theta-grid", "8", "--out", p]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), "r,theta,u,v,w,log_abs_v,log_abs_w");
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    let rows = read_grid_csv(BufReader::new(text.as_bytes())).unwrap();
    assert_eq!(rows.len(), 88);
    for g in rows.iter().filter(|g| g.r == 1.0) {
        assert!(g.u.abs() < 1e-8, "{g:?}");
    }
    let side: Value = serde_json::from_str(&std::fs::read_to_string(format!("{p}.json")).unwrap()).unwrap();
    assert_eq!(side["schema"], 1);
    assert!(side["seed"].is_u64());
    assert_eq!(side["result"]["rows"], 88);
    assert_eq!(code(&platevoid(&["eval", "--n", "105"])), 64);
}

#[test]
fn config_file_then_flags() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# run settings\nseed = 7\noutput = csv").unwrap();
    let cfg = f.path().to_str().unwrap();
    let out = platevoid(&["spectrum", "--n", "20", "--config", cfg]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("N,k,xi,lambda,plate_eig\n"));
    let v = json(&platevoid(&["spectrum", "--n", "20", "--config", cfg, "--output", "json", "--seed", "9"]));
    assert_eq!(v["seed"], 9);
    assert_eq!(v["config"]["output"], "json");
}

#[test]
fn precision_from_environment() {
    let run = |val: &str| {
        Command::new(env!("CARGO_BIN_EXE_platevoid"))
            .args(["spectrum", "--n", "20"])
            .env("PLATE_VOID_PRECISION", val)
            .output()
            .unwrap()
    };
    let out = run("extended");
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["config"]["precision"], "extended");
    let d = json(&platevoid(&["spectrum", "--n", "20"]));
    let (a, b) = (v["result"][0]["xi"].as_f64().unwrap(), d["result"][0]["xi"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-12);
    assert_eq!(code(&run("quad")), 64);
}
