use std::fs;
use std::process::{Command, Output};

fn egue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egue")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn moments_examples() {
    let out = egue(&["moments", "--omega", "6", "--r", "3", "--irrep", "5,5,5", "--lambda-s", "1", "--lambda-a", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["h2"].as_f64(), Some(3300.0));
    assert_eq!(v["irrep"], "5,5,5");

    let out = egue(&["moments", "--omega", "6", "--r", "1", "--irrep", "10"]);
    assert_eq!(json(&out)["h2"].as_f64(), Some(4725.0));
}

#[test]
fn coupling_flags_are_squared() {
    let out = egue(&["moments", "--omega", "6", "--r", "1", "--irrep", "10", "--lambda-s", "2"]);
    assert_eq!(json(&out)["h2"].as_f64(), Some(4.0 * 4725.0));
}

#[test]
fn moments_csv() {
    let out = egue(&["moments", "--omega", "6", "--r", "1", "--irrep", "10", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("omega,r,statistics,irrep,m,dim_u,p_sym"));
    assert!(lines.next().unwrap().ends_with(",4725,68.7386354243376"));
}

#[test]
fn coverage_error_exits_3() {
    let out = egue(&["moments", "--omega", "6", "--r", "3", "--irrep", "4,3,2"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    let desc: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(desc["error"], "table_coverage");
    assert_eq!(desc["shape"], "AB/AC");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(egue(&["moments", "--irrep", "4,x"]).status.code(), Some(2));
    assert_eq!(egue(&["moments", "--irrep", "2,3"]).status.code(), Some(2));
    assert_eq!(egue(&["moments", "--r", "1", "--irrep", "2,2"]).status.code(), Some(2));
    assert_eq!(egue(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn covariance_record() {
    let out = egue(&["covariance", "--omega", "6", "--r", "1", "--irrep-a", "4", "--irrep-b", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["sqrt_sigma11"].as_f64().unwrap() - 0.10076).abs() < 1e-5);
    assert!(v["sigma22"].as_f64().unwrap() > 0.0);

    let out = egue(&["covariance", "--omega", "6", "--r", "2", "--irrep-a", "2,2", "--irrep-b", "2,2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn scan_csv_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = egue(&["scan", "--quantity", "WIDTH", "--family", "THREE", "--m-min", "3", "--m-max", "15", "--csv", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,irrep,casimir_su3,value,error"));
    let values: Vec<f64> = lines.map(|l| l.rsplit(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 13);
    assert!(values.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn scan_keeps_coverage_rows() {
    let out = egue(&["scan", "--quantity", "SIGMA22", "--family", "THREE", "--m-min", "5", "--m-max", "5", "--partner", "5,5,5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("m,irrep,m_prime,irrep_prime,casimir_su3,value,error\n"));
    // {3,1,1} needs an uncovered cross-channel entry.
    assert!(text.lines().nth(1).unwrap().contains("no table entry"));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out_dir = dir.path().join(name);
        let out = egue(&["simulate", "--omega", "4", "--r", "1", "--m", "3", "--reals", "500", "--seed", "42", "--out", out_dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        (out.stdout, fs::read(out_dir.join("estimate.json")).unwrap(), fs::read(out_dir.join("pairs.csv")).unwrap())
    };
    let a = run("a");
    assert_eq!(a, run("b"));
    let stdout = String::from_utf8(a.0).unwrap();
    let z: f64 = stdout.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!(z.abs() <= 3.0, "z = {z}");
}

#[test]
fn simulate_over_cap_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_egue"))
        .args(["simulate", "--omega", "2", "--r", "3", "--m", "8", "--reals", "10", "--out"])
        .arg(dir.path().join("x"))
        .env("EGUE_FOCK_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = egue(&["simulate", "--omega", "6", "--r", "3", "--m", "8", "--reals", "10", "--out", dir.path().join("y").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_passes_with_enough_checks() {
    let out = egue(&["verify", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["n_checks"].as_u64().unwrap() >= 60);
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_as_printed_fails_and_reports_mismatch() {
    let out = egue(&["verify", "--sign-convention", "as-printed"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("omega=6 f=4 q_sym_1: generic=787.5 AS_PRINTED=157.5 (mismatch) P_MAGNITUDE=787.5"));
    assert!(text.contains("VERIFY FAILED: first broken identity r2."));
}
