//! Binary-level contract tests: exit codes, report shapes, and the
//! round-trip between `build --out` and `verify --in`.

use std::path::PathBuf;
use std::process::{Command, Output};

use ybe_core::ggsbuild::standard_r;
use ybe_core::tensorops::SparseMatrix;

fn ybe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ybe"))
        .args(args)
        .env_remove("YBE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ybe-cli-test-{}-{name}", std::process::id()))
}

#[test]
fn enumerate_counts_and_exit_codes() {
    // [TRIVIAL] plumbing around the frozen counts
    let out = ybe(&["enumerate", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).contains("count: 1"));

    let out = ybe(&["enumerate", "--n", "5", "--orbits"]);
    assert!(stdout_str(&out).contains("count: 13"));

    let out = ybe(&["enumerate", "--n", "5"]);
    assert!(stdout_str(&out).contains("count: 33"));

    // guardrail: out-of-range rank is a usage error
    let out = ybe(&["enumerate", "--n", "12"]);
    assert_eq!(out.status.code(), Some(2));

    // clap-level misuse is also exit 2
    let out = ybe(&["enumerate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn build_all_zero_trivial_family_is_standard() {
    // [PAPER] the trivial family at the origin builds the standard matrix
    let out = ybe(&[
        "build", "--label", "4", "--param", "c12=0", "--param", "c13=0", "--param", "c14=0",
        "--param", "c23=0", "--param", "c24=0", "--param", "c34=0", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let r: SparseMatrix = serde_json::from_value(report["r"].clone()).unwrap();
    assert_eq!(r, standard_r(5));
    assert_eq!(report["certificate"]["all_passed"], serde_json::json!(true));
}

#[test]
fn build_verify_round_trip() {
    // [DERIVED] a written bundle re-verifies from disk, full suite
    let path = temp_path("bundle.json");
    let out = ybe(&[
        "build", "--label", "2a", "--param", "c=1/2", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).contains("overall: pass"));

    let out = ybe(&["verify", "--in", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], serde_json::json!(true));
    for check in ["qybe", "hecke", "cybe", "nonunitarity", "semiclassical", "ratio"] {
        assert_eq!(report["checks"][check], serde_json::json!(true), "{check}");
    }
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_rejects_corrupted_matrix() {
    // [TRIVIAL] mutation via the binary: exit 1, not 2
    let path = temp_path("corrupt.json");
    let built = ybe(&["build", "--label", "1b", "--json"]);
    let bundle: serde_json::Value = serde_json::from_slice(&built.stdout).unwrap();
    let mut matrix = bundle["r"].clone();
    // turn the leading q into q + 1: breaks the quantum identities while
    // leaving the h-derivative (hence the semiclassical check) untouched
    matrix["entries"][0]["value"] = serde_json::json!([[1, 1, 0, 1], [1, 1, 1, 1]]);
    std::fs::write(&path, serde_json::to_string(&matrix).unwrap()).unwrap();

    let out = ybe(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_str(&out).contains("overall: FAIL"));

    // restricting to a passing subset flips the verdict
    let out = ybe(&["verify", "--in", path.to_str().unwrap(), "--checks", "semiclassical"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_usage_errors() {
    let out = ybe(&["verify", "--in", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));

    let path = temp_path("notjson.txt");
    std::fs::write(&path, "not json at all").unwrap();
    let out = ybe(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = ybe(&["build", "--label", "2a", "--param", "c=1/2", "--checks", "x"]);
    assert_eq!(out.status.code(), Some(2)); // unknown flag for build
    std::fs::remove_file(&path).ok();
}

#[test]
fn r0_json_shape() {
    let out = ybe(&["r0", "--label", "3a", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["dimension"], serde_json::json!(3));
    assert_eq!(
        report["parameters"],
        serde_json::json!(["x", "y", "z"])
    );
    assert_eq!(report["basis"].as_array().unwrap().len(), 6);

    // a bare triple gets solver-named parameters
    let out = ybe(&["r0", "--triple", "n=5;g1=1;g2=2;tau=1:2", "--json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["dimension"], serde_json::json!(3));
    let params: Vec<String> = report["parameters"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(params.len(), 3);
    assert!(params.iter().all(|p| p.starts_with('c') && p.len() == 3));
}

#[test]
fn export_mirrors_printed_layout() {
    let out = ybe(&["export", "--label", "1b"]);
    assert_eq!(out.status.code(), Some(0));
    let tex = stdout_str(&out);
    assert!(tex.starts_with("\\left(\n\\begin{smallmatrix}\n"));
    assert!(tex.trim_end().ends_with("\\end{smallmatrix}\\right)"));
    assert_eq!(tex.matches("\\\\\n").count(), 25); // one per row
    assert!(tex.contains("q^{\\frac{1}{5}}"));
    assert!(tex.contains("q^{\\frac{1}{5}}-q^{-\\frac{9}{5}}"));
    assert!(tex.contains("q-q^{-1}")); // the hat-q entries, expanded
}

#[test]
fn paper_check_text_and_json_agree() {
    let text = ybe(&["paper-check"]);
    assert_eq!(text.status.code(), Some(0));
    let body = stdout_str(&text);
    assert!(body.contains("certified 13/13"));
    assert!(body.contains("convention probe"));
    assert!(body.contains("sl(5) raw triple count: 33"));

    let json = ybe(&["paper-check", "--json"]);
    let report: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(report["sl5_raw_count"], serde_json::json!(33));
    assert_eq!(report["certified"], serde_json::json!(13));
    assert_eq!(report["family_count"], serde_json::json!(13));
    assert_eq!(report["passed"], serde_json::json!(true));
    assert_eq!(report["families"].as_array().unwrap().len(), 13);
}
