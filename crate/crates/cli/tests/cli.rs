use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tlcanon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlcanon"))
        .args(args)
        .env_remove("TLCANON_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn monomial_check_a3_passes() {
    let out = tlcanon(&["monomial-check", "--graph", "A3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["result"]["checked"], 14);
    assert_eq!(v["verdict"]["holds"], true);
}

#[test]
fn affine_counterexample_is_an_expected_failure() {
    let out = tlcanon(&["counterexample", "--graph", "affA3", "--cap", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let named = &json(&out)["result"]["named"][0];
    assert_eq!(named["w"], serde_json::json!([1, 3, 2, 4, 1, 3]));
    assert_eq!(named["monomial_is_ic"], false);
    assert_eq!(named["ic_verified"], true);
}

#[test]
fn h3_positivity_passes() {
    let out = tlcanon(&["positivity", "--graph", "H3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["result"]["not_positive"], serde_json::json!([]));
}

#[test]
fn d4_kernel_is_not_spanned() {
    let out = tlcanon(&["kl-kernel", "--graph", "D4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["result"]["spanned"], false);
    assert_eq!(v["result"]["dim_J"], 144);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["ic", "--graph", "affA3"][..],
        &["ic", "--graph", "Q7"],
        &["ic", "--graph", "A2", "--format", "xml"],
        &["kl-kernel", "--graph", "E6", "--budget", "1000"],
        &["mult", "--graph", "A2", "1,x", "2"],
        &["frobnicate"],
    ] {
        let out = tlcanon(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn latex_export_of_a2_table() {
    let out = tlcanon(&["ic", "--graph", "A2", "--format", "latex"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("\\begin{tabular}"));
    let rows = text
        .lines()
        .filter(|l| l.ends_with("\\\\") && l.starts_with('$'))
        .count();
    assert_eq!(rows, 5);
}

#[test]
fn exports_are_byte_identical() {
    for format in ["json", "csv", "latex"] {
        let a = tlcanon(&["transitions", "--graph", "A3", "--format", format]);
        let b = tlcanon(&["transitions", "--graph", "A3", "--format", format]);
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn transition_csv_row() {
    let out = tlcanon(&["transitions", "--graph", "A2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().find(|l| l.starts_with("s1s2,")).unwrap();
    assert_eq!(row.split(',').skip(1).filter(|c| !c.is_empty()).count(), 4);
}

#[test]
fn group_listing_is_json_lines() {
    let out = tlcanon(&["group", "--graph", "A2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows.iter().filter(|r| r["in_wc"] == true).count(), 5);
}

#[test]
fn mult_in_monomial_basis() {
    // b_s b_t b_s = b_s in A2
    let out = tlcanon(&["mult", "--graph", "A2", "1,2", "1", "--basis", "monomial"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let coeffs = &json(&out)["result"]["product"]["coeffs"];
    assert_eq!(coeffs, &serde_json::json!([{"word": [1], "poly": {"0": 1}}]));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/report.json");
    let out = tlcanon(&["ic", "--graph", "B3", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let direct = tlcanon(&["ic", "--graph", "B3"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

fn cache_file(dir: &Path) -> std::path::PathBuf {
    let entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1, "{entries:?}");
    entries[0].clone()
}

#[test]
fn cache_hits_and_recovers_from_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = tlcanon(&["ic", "--graph", "H3", "--cache-dir", d]);
    assert!(stderr(&first).contains("cache Miss"), "{}", stderr(&first));
    let second = tlcanon(&["ic", "--graph", "H3", "--cache-dir", d]);
    assert!(stderr(&second).contains("cache Hit"), "{}", stderr(&second));
    assert_eq!(first.stdout, second.stdout);

    let file = cache_file(dir.path());
    let text = std::fs::read_to_string(&file).unwrap();
    // Flip one coefficient so the stored table stops being bar-invariant.
    let tampered = text.replacen("\"-1\":1", "\"-1\":2", 1);
    assert_ne!(tampered, text);
    std::fs::write(&file, tampered).unwrap();
    let third = tlcanon(&["ic", "--graph", "H3", "--cache-dir", d]);
    assert!(stderr(&third).contains("cache Rejected"), "{}", stderr(&third));
    assert_eq!(third.stdout, first.stdout);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), text);

    std::fs::write(&file, "not json").unwrap();
    let fourth = tlcanon(&["ic", "--graph", "H3", "--cache-dir", d]);
    assert!(stderr(&fourth).contains("cache Rejected"));
    assert_eq!(fourth.status.code(), Some(0));
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tlcanon"))
        .args(["monomial-check", "--graph", "A3"])
        .env("TLCANON_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    cache_file(dir.path());
}

#[test]
fn unwritable_cache_is_an_error() {
    let file = tempfile::NamedTempFile::new().unwrap();
    let out = tlcanon(&["ic", "--graph", "A2", "--cache-dir", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}
