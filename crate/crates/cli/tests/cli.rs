use std::process::{Command, Output};

use serde_json::Value;

fn hurwitz(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .env("HURWITZ_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn compute_all_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = hurwitz(
        &["compute", "--kind", "monotone", "--r", "2", "--g", "0", "--mu", "1,3", "--method", "all"],
        dir.path(),
    );
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["status"], "PASS");
    let values: Vec<&Value> = doc["results"].as_array().unwrap().iter().map(|row| &row["value"]).collect();
    assert_eq!(values.len(), 3);
    assert!(values.iter().all(|v| *v == "2"));
}

#[test]
fn single_point_degree_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = hurwitz(&["compute", "--kind", "monotone", "--r", "1", "--g", "0", "--mu", "1"], dir.path());
    assert!(out.status.success());
    assert_eq!(json(&out)["results"][0]["value"], "1");
}

#[test]
fn oracle_is_skipped_above_its_cap() {
    let dir = tempfile::tempdir().unwrap();
    let out = hurwitz(&["compute", "--kind", "usual", "--r", "1", "--mu", "4,3", "--method", "all"], dir.path());
    assert!(out.status.success());
    let doc = json(&out);
    let oracle = &doc["results"][2];
    assert_eq!(oracle["method"], "oracle");
    assert!(oracle["value"].is_null());
    assert!(oracle["note"].as_str().unwrap().contains("skipped"));
}

#[test]
fn unstable_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = hurwitz(&["unstable-check", "--kind", "monotone", "--r", "2", "--order", "12"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "PASS");
}

#[test]
fn quasipolynomiality_passes_on_every_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = hurwitz(&["verify-quasipoly", "--kind", "strict", "--r", "2", "--g", "0", "--n", "3"], dir.path());
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["results"].as_array().unwrap().len(), 4);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["json", "csv", "text"] {
        let args = ["--format", format, "cross-validate", "--r", "2", "--max-degree", "4", "--max-b", "4"];
        let first = hurwitz(&args, dir.path());
        let second = hurwitz(&args, dir.path());
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "{format}");
    }
}

#[test]
fn csv_has_a_header_and_one_line_per_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = hurwitz(
        &["--format", "csv", "series", "--kind", "monotone", "--r", "1", "--mu", "2", "--order", "5"],
        dir.path(),
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "b,g,value");
    assert_eq!(lines.len(), 6);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let built = json(&hurwitz(&["cache", "build", "--max-degree", "6"], dir.path()));
    let records = built["results"][0]["records"].as_u64().unwrap();
    assert!(records > 0);
    let info = json(&hurwitz(&["cache", "info"], dir.path()));
    assert_eq!(info["results"][0]["exists"], true);
    assert_eq!(info["results"][0]["records"].as_u64().unwrap(), records);
    let cached = hurwitz(&["compute", "--kind", "monotone", "--r", "2", "--mu", "2,2"], dir.path());
    assert_eq!(json(&cached)["results"][0]["value"], "3/2");
    let cleared = json(&hurwitz(&["cache", "clear"], dir.path()));
    assert_eq!(cleared["results"][0]["removed"], true);
}

#[test]
fn invalid_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!hurwitz(&["compute", "--kind", "bogus", "--r", "1", "--mu", "1"], dir.path()).status.success());
    assert!(!hurwitz(&["compute", "--kind", "usual", "--r", "1"], dir.path()).status.success());
    assert!(!hurwitz(&["unstable-check", "--kind", "usual", "--r", "1"], dir.path()).status.success());
}
