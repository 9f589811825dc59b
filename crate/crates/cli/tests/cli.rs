use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lieforge"));
    c.env_remove("LIEFORGE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Writes a family file and returns its path.
fn family(name: &str, args: &[&str]) -> String {
    let path = scratch(name);
    let p = path.to_str().unwrap().to_string();
    let mut full = vec!["family"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &p]);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn write(name: &str, contents: &str) -> String {
    let path = scratch(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn family_writes_q6() {
    let p = family("q6-family.json", &["q2n", "--m", "3"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(v["dim"], 6);
    assert_eq!(v["generators"].as_array().unwrap().len(), 6);
}

#[test]
fn family_below_bound_is_rejected() {
    let o = run(&["family", "q2n", "--m", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("m >= 3"));
    assert_eq!(code(&run(&["family", "nope"])), 2);
    assert_eq!(code(&run(&["family", "r-lambda"])), 2);
}

#[test]
fn family_r7_with_value() {
    let o = run(&["family", "r-lambda", "--n", "3", "--lambda2", "1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 7);
    assert!(v["parameters"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_q6_and_r8() {
    let q6 = family("q6-analyze.json", &["q2n", "--m", "3"]);
    let o = run(&["analyze", &q6, "--report", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["N_bb"], 2);
    assert_eq!(v["N_rc"], 2);
    assert_eq!(v["j0"], 2);
    assert_eq!(v["der_dim"], 9);
    assert_eq!(v["jacobi"], true);

    let r8 = family("r8-analyze.json", &["r-max", "--n", "3"]);
    let v: Value = serde_json::from_str(&stdout(&run(&["analyze", &r8, "--report", "json"]))).unwrap();
    assert_eq!(v["N_bb"], 0);
    assert_eq!(v["N_rc"], 0);
}

#[test]
fn analyze_omits_derivations_with_parameters() {
    let r7 = family("r7-symbolic-analyze.json", &["r-lambda", "--n", "3"]);
    let v: Value = serde_json::from_str(&stdout(&run(&["analyze", &r7, "--report", "json"]))).unwrap();
    assert_eq!(v["N_bb"], 1);
    assert!(v.get("der_dim").is_none());
    assert!(v["DS"].is_null());
}

#[test]
fn analyze_flags_jacobi_failure() {
    let bad = write(
        "not-lie.json",
        r#"{"dim":3,"generators":["A","B","C"],"brackets":[
            {"left":"A","right":"B","terms":[{"gen":"C","coeff":"1"}]},
            {"left":"A","right":"C","terms":[{"gen":"A","coeff":"1"}]}]}"#,
    );
    let o = run(&["analyze", &bad]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("jacobi: false"));
}

#[test]
fn analyze_rejects_corrupted_file() {
    let p = write("corrupt.json", "{\"dim\": 3, \"generators\": [");
    assert_eq!(code(&run(&["analyze", &p])), 2);
    assert_eq!(code(&run(&["analyze", "/nonexistent/file.json"])), 2);
}

#[test]
fn analyze_is_byte_stable() {
    let p = family("r9-stable.json", &["r-eps", "--n", "4", "--eps", "-1/3"]);
    let a = run(&["analyze", &p, "--report", "json"]);
    let b = bin().args(["analyze", &p, "--report", "json"]).env("LIEFORGE_SEED", "7").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_casimir_on_q6() {
    let q6 = family("q6-verify.json", &["q2n", "--m", "3"]);
    let i2 = write(
        "i2.json",
        r#"{"bases":[{"name":"I2","poly":"x1*x6 + x3*x5 - 1/2*x4^2"}],
            "terms":[{"coeff":"1","exponents":{"I2":"1"}}]}"#,
    );
    let o = run(&["verify-invariant", &q6, &i2]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(": 0")).count(), 6);
}

#[test]
fn verify_log_invariant_on_r7_eps() {
    let r7 = family("r7-eps-verify.json", &["r-eps", "--n", "3"]);
    let j = write(
        "log-invariant.json",
        r#"{"bases":[{"name":"I2","poly":"x1*x6 + x3*x5 - 1/2*x4^2"},{"name":"x","poly":"x6"}],
            "terms":[{"coeff":"1","exponents":{"I2":"1","x":"-2"}},
                     {"coeff":"-eps","logs":{"x":1}}]}"#,
    );
    assert_eq!(code(&run(&["verify-invariant", &r7, &j])), 0);
}

#[test]
fn verify_reports_residual() {
    let q6 = family("q6-residual.json", &["q2n", "--m", "3"]);
    let x1 = write("x1.json", r#"{"terms":[{"coeff":"x1"}]}"#);
    let o = run(&["verify-invariant", &q6, &x1]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).lines().any(|l| l == "X2: x3"));
}

#[test]
fn verify_rejects_foreign_coordinates() {
    let q6 = family("q6-foreign.json", &["q2n", "--m", "3"]);
    let x9 = write("x9.json", r#"{"terms":[{"coeff":"x9"}]}"#);
    assert_eq!(code(&run(&["verify-invariant", &q6, &x9])), 2);
}

#[test]
fn contact_coefficient_of_r7() {
    let r7 = family("r7-lambda-contact.json", &["r-lambda", "--n", "3"]);
    let o = run(&["contact", &r7, "--form", "1,0,0,0,0,1,0"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("12*lambda2 + 12") || out.contains("-12*lambda2 - 12"), "{out}");
}

#[test]
fn contact_proof_of_none_and_witness() {
    let none = family("r7-eps0.json", &["r-eps", "--n", "3", "--eps", "0"]);
    let o = run(&["contact", &none]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("proof of none"));

    let tail = family("r7-tail.json", &["r-tail", "--n", "3"]);
    let o = run(&["contact", &tail]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("witness: "));
}

#[test]
fn contact_rejects_even_dimension() {
    let q6 = family("q6-contact.json", &["q2n", "--m", "3"]);
    assert_eq!(code(&run(&["contact", &q6])), 2);
}

fn verdicts(out: &str) -> Vec<String> {
    out.lines()
        .filter(|l| l.starts_with('['))
        .map(|l| l.split(':').next().unwrap().to_string())
        .collect()
}

#[test]
fn paper_suite_rejects_small_n() {
    assert_eq!(code(&run(&["paper-suite", "--n", "2"])), 2);
}

#[test]
fn paper_suite_verdicts_ignore_seed() {
    let a = run(&["paper-suite", "--n", "3", "--seed", "7"]);
    let b = bin().args(["paper-suite", "--n", "3"]).env("LIEFORGE_SEED", "11").output().unwrap();
    assert_eq!(code(&a), code(&b));
    assert_eq!(verdicts(&stdout(&a)), verdicts(&stdout(&b)));
}

#[test]
fn paper_suite_exit_code_tracks_failures() {
    let o = run(&["paper-suite", "--n", "3,4", "--seed", "7"]);
    let out = stdout(&o);
    let fails: Vec<&str> = out.lines().filter(|l| l.contains("] FAIL ")).collect();
    assert_eq!(code(&o), if fails.is_empty() { 0 } else { 1 });
    // Only the stated top-power magnitude for r_{2n+2} disagrees with the computation.
    assert!(fails.iter().all(|l| l.starts_with("[ 5]")), "{out}");
    assert!(out.lines().filter(|l| l.starts_with("[ 5]")).all(|l| l.contains("N_bb=0 N_rc=0")));
}

#[test]
fn bad_seed_environment_is_usage_error() {
    let o = bin().args(["paper-suite", "--n", "3"]).env("LIEFORGE_SEED", "x").output().unwrap();
    assert_eq!(code(&o), 2);
}
