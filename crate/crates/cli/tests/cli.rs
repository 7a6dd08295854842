use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn kappa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kappa")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_matrix(dir: &Path, name: &str, rows: [[f64; 2]; 2]) -> PathBuf {
    let entries: Vec<[f64; 2]> = rows.iter().flatten().map(|&x| [x, 0.0]).collect();
    let path = dir.join(name);
    fs::write(&path, serde_json::json!({ "dim": 2, "entries": entries }).to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dist_reproduces_the_closed_form_at_one_half() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_matrix(dir.path(), "a.json", [[4.0, 0.0], [0.0, 1.0]]);
    let b = write_matrix(dir.path(), "b.json", [[2.5, 1.5], [1.5, 2.5]]);
    let out = kappa(&["dist", "--p", "0.5", s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = stdout_json(&out);
    let expected = 19.0 / 4.0 - 3.0 * 2f64.sqrt();
    assert!((v["d_squared"].as_f64().unwrap() - expected).abs() < 1e-10);
    assert_eq!(v["kind"], "dp");
    assert!(stderr(&out).contains("# invocation: kappa dist --p 0.5 --kind dp"));
}

#[test]
fn bures_on_commuting_diagonals() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_matrix(dir.path(), "a.json", [[4.0, 0.0], [0.0, 1.0]]);
    let b = write_matrix(dir.path(), "b.json", [[9.0, 0.0], [0.0, 1.0]]);
    let out = kappa(&["dist", "--kind", "bures", s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["distance"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["p"].as_f64(), Some(2.0));
}

#[test]
fn hellinger_rejects_a_conflicting_p() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_matrix(dir.path(), "a.json", [[4.0, 0.0], [0.0, 1.0]]);
    let out = kappa(&["dist", "--kind", "hellinger", "--p", "2", s(&a), s(&a)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_p_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_matrix(dir.path(), "a.json", [[4.0, 0.0], [0.0, 1.0]]);
    let out = kappa(&["dist", "--p", "-1", s(&a), s(&a)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("p must be positive"));
    assert!(out.stdout.is_empty());
}

#[test]
fn matrix_rejections_name_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_matrix(dir.path(), "good.json", [[1.0, 0.0], [0.0, 1.0]]);
    let indefinite = write_matrix(dir.path(), "indef.json", [[1.0, 2.0], [2.0, 1.0]]);
    let skew = write_matrix(dir.path(), "skew.json", [[1.0, 0.5], [0.0, 1.0]]);
    let short = dir.path().join("short.json");
    fs::write(&short, r#"{"dim":2,"entries":[[1,0],[0,0],[0,0]]}"#).unwrap();
    let extra = dir.path().join("extra.json");
    fs::write(&extra, r#"{"dim":1,"entries":[[1,0]],"note":1}"#).unwrap();

    for (file, needle) in [
        (&indefinite, "not positive semidefinite"),
        (&skew, "not Hermitian"),
        (&short, "dim^2"),
        (&extra, "unknown field"),
    ] {
        let out = kappa(&["dist", "--p", "1", s(&good), s(file)]);
        assert_eq!(out.status.code(), Some(2), "{}", file.display());
        assert!(stderr(&out).contains(needle), "{}: {}", file.display(), stderr(&out));
    }
}

#[test]
fn dimension_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_matrix(dir.path(), "a.json", [[4.0, 0.0], [0.0, 1.0]]);
    let one = dir.path().join("one.json");
    fs::write(&one, r#"{"dim":1,"entries":[[1,0]]}"#).unwrap();
    let out = kappa(&["dist", "--p", "1", s(&a), s(&one)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dimension mismatch"));
}

#[test]
fn unknown_flags_are_rejected() {
    assert_eq!(kappa(&["counterexample", "--tol", "1"]).status.code(), Some(2));
    assert_eq!(kappa(&["verify", "--p", "1", "--bogus"]).status.code(), Some(2));
}

#[test]
fn verify_passes_for_p_three() {
    let out = kappa(&["verify", "--p", "3", "--trials", "200", "--dim", "4", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    for cell in v["cells"].as_array().unwrap() {
        assert_eq!(cell["checks"], 200);
        assert_eq!(cell["failed"], 0);
    }
}

#[test]
fn verify_with_the_built_in_pair() {
    let out = kappa(&["verify", "--p", "0.5", "--trials", "1", "--dim", "2", "--paper-pair", "--norm", "trace"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = stdout_json(&out);
    let margins = &v["paper_pair"][0]["margins"];
    let expected = 5.0 - (0.25 + 3.0 * 2f64.sqrt());
    assert!((margins[0].as_f64().unwrap() - expected).abs() < 1e-10);
    assert!(margins[1].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn verify_rejects_bad_norms() {
    let out = kappa(&["verify", "--p", "1", "--norm", "kyfan:9", "--dim", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("out of range"));
    let out = kappa(&["verify", "--p", "1", "--norm", "schatten:0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = kappa(&["verify", "--p", "1", "--norm", "frobenius"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_needs_an_exponent() {
    assert_eq!(kappa(&["verify"]).status.code(), Some(2));
    assert_eq!(kappa(&["verify", "--p", "1", "--p-grid", "1,2"]).status.code(), Some(2));
}

#[test]
fn counterexample_reproduces() {
    let out = kappa(&["counterexample"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    let margin = v["triangle_margin"].as_f64().unwrap();
    assert!(margin < 0.0 && (margin + 7.6023e-5).abs() < 1e-8);
}

#[test]
fn pretty_output_is_a_table() {
    let out = kappa(&["--pretty", "counterexample"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("triangle margin"));
    assert!(text.trim_end().ends_with("reproduced"));
}

#[test]
fn search_reports_the_built_in_triple() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("scan");
    let out = kappa(&[
        "search",
        "--p-grid",
        "0.5",
        "--dim",
        "2",
        "--trials",
        "1",
        "--seed",
        "0",
        "--include-paper-triple",
        "--out",
        s(&out_dir),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("p,trials,violations,min_margin"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..3], &["0.5", "1", "1"]);
    let margin: f64 = row[3].parse().unwrap();
    assert!((margin + 7.6023e-5).abs() < 1e-8);
    let jsonl = fs::read_to_string(out_dir.join("violations.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 1);
    let v: Value = serde_json::from_str(jsonl.lines().next().unwrap()).unwrap();
    assert_eq!(v["provenance"]["kind"], "paper-triple");
}

#[test]
fn search_output_does_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        let out_dir = dir.path().join(format!("t{threads}"));
        let out = kappa(&[
            "search",
            "--p-min",
            "0.25",
            "--p-max",
            "1.5",
            "--p-steps",
            "6",
            "--trials",
            "150",
            "--seed",
            "11",
            "--include-paper-triple",
            "--perturb",
            "0.05",
            "--threads",
            threads,
            "--out",
            s(&out_dir),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        (fs::read(out_dir.join("violations.jsonl")).unwrap(), fs::read(out_dir.join("summary.csv")).unwrap())
    };
    let one = run("1");
    let eight = run("8");
    assert!(!one.0.is_empty());
    assert_eq!(one, eight);
}

#[test]
fn commuting_sampler_finds_nothing_at_p_one() {
    let out = kappa(&["search", "--p-grid", "1.0", "--sampler", "commuting-diagonal", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["summary"][0]["trials"], 100);
}

#[test]
fn search_validates_before_running() {
    for args in [
        &["search", "--p-grid", "0.5", "--trials", "0"][..],
        &["search", "--p-grid", "0.5,-1"],
        &["search", "--dim", "3", "--include-paper-triple"],
        &["search", "--p-min", "2", "--p-max", "1"],
        &["search", "--scale", "0"],
        &["search", "--perturb", "-0.1"],
    ] {
        let out = kappa(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn invocation_echo_replays_the_run() {
    let first = kappa(&["search", "--p-grid", "0.5,1", "--trials", "20", "--seed", "3"]);
    let line = stderr(&first).lines().find_map(|l| l.strip_prefix("# invocation: kappa ")).unwrap().to_string();
    let args: Vec<&str> = line.split(' ').collect();
    let second = kappa(&args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}
