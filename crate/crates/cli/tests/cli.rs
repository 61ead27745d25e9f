use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> (Output, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_bianchi"))
        .args(args)
        .env_remove("BIANCHI_DATA_DIR")
        .output()
        .expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, report)
}

fn pass(args: &[&str]) -> Value {
    let (out, rep) = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(rep["status"], "pass");
    rep
}

#[test]
fn relators_and_meridians() {
    let rep = pass(&["relators-check"]);
    assert_eq!(rep["payload"]["relators"].as_array().unwrap().len(), 8);
    let rep = pass(&["meridians-check"]);
    assert_eq!(rep["payload"]["parabolic_kernel_members"], 42);
}

#[test]
fn cusp_count_and_systole() {
    assert_eq!(pass(&["cusp-count", "--alpha", "3+2i"])["payload"]["cusps"], 42);
    let rep = pass(&["systole-bound", "--alpha", "3+2i"]);
    let b = rep["payload"]["bound"]["value"].as_f64().unwrap();
    assert!((b - 2.0 * 5.5f64.acosh()).abs() < 1e-12);
    assert_eq!(rep["payload"]["bound"]["tolerance"], 1e-12);
    assert_eq!(rep["payload"]["excludes_genus2"], true);
}

#[test]
fn small_norm_fails_with_report() {
    let (out, rep) = run(&["systole-bound", "--alpha", "1+i"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rep["status"], "fail");
    assert!(rep["payload"]["error"].is_string());
}

#[test]
fn usage_error_exits_two() {
    let (out, _) = run(&["cusp-count"]);
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn geometry_threshold_is_strict() {
    let rep = pass(&["geometry", "--sys", "4.369"]);
    assert_eq!(rep["payload"]["sys"]["excludes_genus2"], false);
    let rep = pass(&["geometry", "--sys", "4.37", "--r", "0"]);
    assert_eq!(rep["payload"]["sys"]["excludes_genus2"], true);
    assert_eq!(rep["payload"]["r"]["min_genus"], 1);
}

#[test]
fn coset_tables() {
    assert_eq!(pass(&["coset-table", "--alpha", "1+i"])["payload"]["cosets"], 6);
    let rep = pass(&["todd-coxeter", &data("s3.txt")]);
    assert_eq!(rep["payload"]["cosets"], 6);
    let rep = pass(&["todd-coxeter", &data("s3.txt"), "--subgroup", "b"]);
    assert_eq!(rep["payload"]["cosets"], 2);
    let (out, rep) = run(&["todd-coxeter", &data("fig8.txt"), "--limit", "50"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rep["status"], "fail");
}

#[test]
fn rewrite_kernel() {
    let rep = pass(&["rewrite", "--alpha", "3+2i", "--word", "t^-5*u", "t^13"]);
    assert_eq!(rep["payload"]["generators"], 3277);
    assert_eq!(rep["payload"]["relators"], 8736);
    let (out, rep) = run(&["rewrite", "--alpha", "3+2i", "--word", "t"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(rep["payload"]["rewritten"][0]["error"].is_string());
}

#[test]
fn fill_keep_fourteen() {
    let rep = pass(&["fill", "--keep", "14"]);
    assert_eq!(rep["payload"]["matching"], serde_json::json!([14]));
    assert_eq!(rep["payload"]["results"][0]["abelian"]["display"], "Z");
    let rep = pass(&["fill", "--keep", "none"]);
    assert_eq!(rep["payload"]["trivial"], true);
}

#[test]
fn fingerprints() {
    let rep = pass(&["fingerprint", &data("fig8_redundant.txt"), "--simplify"]);
    assert_eq!(rep["payload"]["generators"], 2);
    let (out, rep) = run(&["compare", &data("fig8.txt"), &data("trefoil.txt")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rep["payload"]["equal"], false);
    let rep = pass(&["compare", &data("fig8.txt"), &data("fig8_redundant.txt"), "--targets", "S3,PSL2(7)"]);
    assert_eq!(rep["payload"]["first"]["counts"].as_array().unwrap().len(), 2);
}

#[test]
fn audit_small() {
    let rep = pass(&["audit-geodesics", "--alpha", "3+2i", "--radius", "6", "--jobs", "2"]);
    assert_eq!(rep["payload"]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn monodromy() {
    let rep = pass(&["monodromy-check", &data("fig8_cyclic.mono")]);
    assert_eq!(rep["payload"]["preimage_counts"], serde_json::json!([1]));
    let (out, rep) = run(&["monodromy-check", &data("bad.mono")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(rep["payload"]["check"]["failing_relator"].is_string());
    let rep = pass(&[
        "monodromy-extend",
        &data("fig8_cyclic.mono"),
        "--full",
        &data("fig8_plus.txt"),
        "--new-meridians",
        "c",
    ]);
    assert_eq!(rep["payload"]["preimage_counts"], serde_json::json!([1, 3]));
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["cusp-count", "--alpha", "3+2i"]).0.stdout;
    let b = run(&["cusp-count", "--alpha", "3+2i"]).0.stdout;
    assert_eq!(a, b);
    let (_, rep) = run(&["cusp-count", "--alpha", "3+2i"]);
    assert!(rep.get("wall_time_s").is_none());
    let (_, rep) = run(&["cusp-count", "--alpha", "3+2i", "--timing"]);
    assert!(rep["wall_time_s"].is_f64());
}

#[test]
fn data_dir_override() {
    let dir = std::env::temp_dir().join(format!("bianchi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("meridians.txt"), "t^-5*u\n").unwrap();
    let (out, rep) = run(&["meridians-check", "--data-dir", dir.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    // a one-entry table is rejected
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rep["status"], "fail");
}
