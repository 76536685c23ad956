//! CLI integration: flags, outputs, manifests, and the exit-code contract
//! (0 success, 1 usage, 2 nonconvergence, 3 assertion failure, 4 I/O).

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_spslab")
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn regime_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&[
        "regime",
        "--n",
        "3",
        "--alpha",
        "2",
        "--p",
        "2",
        "--q",
        "2.8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("EXISTENCE_RADIAL_ONLY"), "{stdout}");
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("regime.json")).unwrap()).unwrap();
    assert_eq!(json["report"]["classification"], "ExistenceRadialOnly");
    assert!(out.join("manifest.json").exists());
}

#[test]
fn regime_sweep_contains_critical_point_and_boundaries() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&[
        "regime",
        "--n",
        "3",
        "--alpha",
        "2",
        "--p",
        "2",
        "--sweep-p",
        "1.5:2.5:3",
        "--sweep-q",
        "2:6:41",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let sweep = std::fs::read_to_string(out.join("regime_sweep.csv")).unwrap();
    // q = 3 at p = 2 sits exactly on the Coulomb-Sobolev curve
    let has_critical = sweep
        .lines()
        .any(|l| l.contains("2.000000000000e0,3.000000000000e0,EIGENVALUE_CRITICAL"));
    assert!(has_critical, "{sweep}");
    let bounds = std::fs::read_to_string(out.join("boundaries.csv")).unwrap();
    assert!(bounds.starts_with("p,q_cs,q_rad,q_sobolev\n"));
    let row: Vec<&str> = bounds.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row[0].parse::<f64>().unwrap(), 2.0);
    assert_eq!(row[1].parse::<f64>().unwrap(), 3.0);
    assert!((row[2].parse::<f64>().unwrap() - 18.0 / 7.0).abs() < 1e-12);
    assert_eq!(row[3].parse::<f64>().unwrap(), 6.0);
}

#[test]
fn usage_errors_exit_one() {
    let o = run(&[
        "regime", "--n", "3", "--alpha", "2", "--p", "2", "--q", "0.5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["bogus-subcommand"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["solve", "--n", "3", "--alpha", "7", "--p", "2", "--q", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solve_writes_outputs_and_passes_identities() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&[
        "solve",
        "--n",
        "3",
        "--alpha",
        "2",
        "--p",
        "2",
        "--q",
        "4",
        "--m",
        "512",
        "--r-max",
        "200",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("result.json")).unwrap()).unwrap();
    assert_eq!(json["result"]["converged"], true);
    let poh = json["result"]["residuals"]["pohozaev"].as_f64().unwrap();
    assert!(poh <= 1e-3, "pohozaev residual {poh}");
    for f in [
        "profile.csv",
        "profile.json",
        "groundstate.csv",
        "manifest.json",
    ] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    // the six-field energy breakdown is embedded
    for f in ["dirichlet", "coulomb", "lq", "e_star", "j_star", "quotient"] {
        assert!(json["breakdown"].get(f).is_some(), "{f} missing");
    }
}

#[test]
fn solve_nonconvergence_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    // q = 7 is in the Pohožaev nonexistence window: the run carries the
    // NONCONVERGENCE_EXPECTED warning and cannot converge
    let o = run(&[
        "solve",
        "--n",
        "3",
        "--alpha",
        "2",
        "--p",
        "2",
        "--q",
        "7",
        "--m",
        "256",
        "--r-max",
        "100",
        "--max-iter",
        "150",
        "--init",
        "annular:2.0,0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    // outputs and manifest still written
    assert!(out.join("result.json").exists());
    assert!(out.join("manifest.json").exists());
}

#[test]
fn family_annular_slope_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&[
        "family",
        "annular",
        "--n",
        "3",
        "--alpha",
        "2",
        "--p",
        "2",
        "--q",
        "2.5",
        "--q-probe",
        "2.5",
        "--range",
        "64,256,1024,4096,16384,65536",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("slope"), "{stdout}");
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("family.json")).unwrap()).unwrap();
    let slope = json["fitted_slopes"]["quotient"].as_f64().unwrap();
    assert!(slope < 0.0, "quotient slope {slope} not a decay");
    let csv = std::fs::read_to_string(out.join("family.csv")).unwrap();
    assert!(csv.lines().count() >= 7);
}

#[test]
fn verify_brezis_lieb_preset() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&[
        "verify",
        "brezis-lieb",
        "--preset",
        "escaping-bump",
        "--n",
        "3",
        "--alpha",
        "2",
        "--p",
        "2",
        "--q",
        "4",
        "--m",
        "512",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.contains("liminf_nonnegative"));
    assert!(summary.contains("true"));
}

#[test]
fn sweep_runs_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    std::fs::write(
        &cfg,
        br#"{
            "n": 3, "alpha": "2", "p_values": ["2"], "q_values": ["4", "7"],
            "r_min": 1e-3, "r_max": 200.0, "m": 384, "workers": 2,
            "tol_grad": 1e-6, "max_iter": 3000
        }"#,
    )
    .unwrap();
    let out = dir.path().join("o");
    let o = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    // q = 7 is Pohožaev-nonexistent: no solve attempted there, so the sweep
    // itself completes
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert!(csv.contains("EXISTENCE_GENERAL"));
    assert!(csv.contains("NONEXISTENCE"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
}

#[test]
fn sweep_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        br#"{"n": 3, "alpha": "9", "p_values": ["2"], "q_values": ["4"]}"#,
    )
    .unwrap();
    let o = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    // missing file is an I/O error
    let o = run(&["sweep", "--config", "/nonexistent/sweep.json"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn kernel_cache_roundtrip_through_env() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    let mut common = vec![
        "solve", "--n", "3", "--alpha", "2", "--p", "2", "--q", "4", "--m", "256", "--r-max", "100",
    ];
    common.extend_from_slice(&["--cache-dir", cache.to_str().unwrap()]);
    let o = Command::new(bin())
        .args(&common)
        .args(["--out", out1.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(
        cache.read_dir().unwrap().count() >= 1,
        "cache not populated"
    );
    let o = Command::new(bin())
        .args(&common)
        .args(["--out", out2.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success());
    // cached and freshly assembled kernels give identical results
    let a = std::fs::read(Path::new(&out1).join("result.json")).unwrap();
    let b = std::fs::read(Path::new(&out2).join("result.json")).unwrap();
    assert_eq!(a, b);
}
