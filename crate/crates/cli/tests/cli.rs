use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus")
}

fn nfreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nfreg"))
        .arg("--corpus")
        .arg(corpus())
        .args(args)
        .env_remove("NFREG_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_real_quadratic() {
    let o = nfreg(&["verify", "x2-2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.trim_start().starts_with("quadratic")).unwrap();
    assert!(line.contains("verified"));
    assert!(line.contains("margin 5.347999967"), "{line}");
}

#[test]
fn fk_decomposition() {
    let o = nfreg(&["fk", "x2-2", "1,0;0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("f_k = 8 = 1^2 * 8"));
}

#[test]
fn verify_all_is_clean() {
    let o = nfreg(&["verify", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains(" failed "));
}

#[test]
fn theorem_filter() {
    let o = nfreg(&["verify", "x3+x2-2x-1", "--theorem", "rho-bound"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.contains("bound 7.39992"));
}

#[test]
fn usage_and_data_errors_exit_2() {
    assert_eq!(nfreg(&["verify", "no-such-field"]).status.code(), Some(2));
    assert_eq!(nfreg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nfreg(&["verify", "x2-2", "--theorem", "no-such-bound"]).status.code(), Some(2));
    assert_eq!(nfreg(&["height", "x2-2", "1,zz"]).status.code(), Some(2));
}

#[test]
fn bad_corpus_lists_violations() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus().join("x2-2.json")).unwrap();
    let mut rec: serde_json::Value = serde_json::from_str(&text).unwrap();
    // 1 + 2√2 has norm -7
    rec["fundamental_units"] = serde_json::json!([["1", "2"]]);
    rec["signature"] = serde_json::json!([0, 1]);
    std::fs::write(dir.path().join("bad.json"), rec.to_string()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_nfreg"))
        .args(["--corpus", dir.path().to_str().unwrap(), "verify", "--all"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("x2-2.signature"), "{err}");
}

#[test]
fn unit_subgroup_of_index_three() {
    // θ³ = 1 + 2θ is the cube of the fundamental unit
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus().join("x2-x-1.json")).unwrap();
    let mut rec: serde_json::Value = serde_json::from_str(&text).unwrap();
    rec["fundamental_units"] = serde_json::json!([["1", "2"]]);
    let path = dir.path().join("f.json");
    std::fs::write(&path, rec.to_string()).unwrap();
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_nfreg")).arg("--corpus").arg(&path).args(args).output().unwrap();
    let o = run(&["regulator", "x2-x-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("x2-x-1.regulator_hint"));

    rec["regulator_hint"] = serde_json::Value::Null;
    std::fs::write(&path, rec.to_string()).unwrap();
    let o = run(&["regulator", "x2-x-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("Reg = 1.443635475178810342493277e+0"));
}

#[test]
fn report_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = nfreg(&["report", "--format", "json", "--out", out.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let doc = nfreg::io::from_json(&text).unwrap();
    assert_eq!(nfreg::io::to_json(&doc).unwrap(), text);
    assert_eq!(doc.summary.failed, 0);
    assert_eq!(doc.seed, 7);
    let again = nfreg(&["report", "--format", "json", "--seed", "7"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_nfreg"))
        .args(["--corpus", corpus().to_str().unwrap(), "regulator", "x2-2"])
        .env("NFREG_PRECISION", "256")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("8.813735870195430252326093e-1"));
    let radius: f64 = out.split("+- ").nth(1).unwrap().trim().parse().unwrap();
    assert!(radius < 1e-70, "{out}");
}

#[test]
fn tower_output() {
    let o = nfreg(&["tower", "x4-x3-3x2+x+1"]);
    let out = stdout(&o);
    assert!(out.contains("aleph 1/64"));
    assert!(out.contains("k* = x2-x-1"));
    let o = nfreg(&["tower", "x4+x3+x2+x+1"]);
    assert!(stdout(&o).contains("rho = 1 (CM)"));
}
