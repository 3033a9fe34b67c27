use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bootstrap-unique"));
    cmd.env_remove("SOURCE_DATE_EPOCH")
        .env_remove("BOOTSTRAP_UNIQUE_OUT_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn dist_csv() {
    assert_eq!(
        stdout(&["dist", "4", "4"]),
        "k,p,p_f64\n0,0/1,0\n1,1/64,0.015625\n2,21/64,0.328125\n3,9/16,0.5625\n4,3/32,0.09375\n"
    );
}

#[test]
fn dist_cdf_ends_at_one() {
    let text = stdout(&["dist", "6", "3", "--cdf"]);
    assert!(text.starts_with("k,p,p_f64,cdf,cdf_f64\n"));
    assert!(text.trim_end().ends_with(",1/1,1"));
}

#[test]
fn moments_rows() {
    assert_eq!(
        stdout(&["moments", "4", "4", "--t", "2"]),
        "t,kind,moment,moment_f64\n0,raw,1/1,1\n1,raw,175/64,2.734375\n2,raw,505/64,7.890625\n"
    );
    let central = stdout(&["moments", "4", "4", "--t", "2", "--central"]);
    assert!(central.ends_with("2,central,1695/4096,0.413818359375\n"));
}

#[test]
fn joint_and_marginal() {
    let joint = stdout(&["joint", "2", "2", "--A", "2"]);
    assert!(joint.starts_with("k_1,k_2,numerator,denominator,p_f64\n"));
    assert!(joint.contains("\n1,1,1,2,0.5\n"));
    assert_eq!(joint.lines().count(), 6);
    assert_eq!(
        stdout(&["joint", "2", "2", "--A", "2", "--marginal", "1"]),
        "k_1,p,p_f64\n0,1/4,0.25\n1,5/8,0.625\n2,1/8,0.125\n"
    );
}

#[test]
fn exit_codes() {
    let zero_var = run(&["check", "1", "3"]);
    assert_eq!(zero_var.status.code(), Some(2));
    let stderr = String::from_utf8(zero_var.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1);
    assert!(stderr.starts_with("error:"));

    assert_eq!(run(&["joint", "2", "2", "--A", "2", "--marginal", "3"]).status.code(), Some(2));
    assert_eq!(run(&["joint", "0", "2", "--A", "2"]).status.code(), Some(2));
    assert_eq!(run(&["dist", "four", "4"]).status.code(), Some(2));

    assert_eq!(run(&["joint", "30", "30", "30", "--A", "2000", "--cap", "10"]).status.code(), Some(3));
    assert_eq!(run(&["moments", "4", "4", "--t", "5", "--max-order", "3"]).status.code(), Some(3));
    assert_eq!(run(&["grid", "--n-max", "151"]).status.code(), Some(3));
}

#[test]
fn json_document_is_deterministic_with_timestamp() {
    let args = ["check", "50", "50", "--format", "json", "--timestamp", "2000-01-01T00:00:00Z"];
    let first = stdout(&args);
    assert_eq!(first, stdout(&args));
    let doc: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["metadata"]["command"], "check");
    assert_eq!(doc["metadata"]["timestamp"], "2000-01-01T00:00:00Z");
    assert_eq!(doc["metadata"]["parameters"]["n"], 50);
    assert_eq!(doc["rows"][0]["heuristic_pass"], true);
    let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
    assert_eq!(first, again);
}

#[test]
fn source_date_epoch_sets_timestamp() {
    let out = bin()
        .args(["dist", "2", "2", "--format", "json"])
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["metadata"]["timestamp"], "1970-01-01T00:00:00Z");
}

#[test]
fn out_dir_env_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["dist", "3", "2", "--out", "d.csv"])
        .env("BOOTSTRAP_UNIQUE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(text, "k,p,p_f64\n0,0/1,0\n1,1/3,0.3333333333333333\n2,2/3,0.6666666666666666\n");
}

#[test]
fn sample_is_reproducible() {
    let args = ["sample", "10", "--A", "10", "--reps", "20000", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    assert!(String::from_utf8(a.stderr).unwrap().starts_with("# tv_distance = "));
    let other = run(&["sample", "10", "--A", "10", "--reps", "20000", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn sample_profile_json() {
    let text = stdout(&["sample", "2", "2", "--A", "2", "--reps", "50000", "--format", "json", "--timestamp", "t"]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    let tv = doc["metadata"]["summary"]["tv_distance"].as_f64().unwrap();
    assert!(tv < 0.02, "tv {tv}");
    let total: u64 = doc["rows"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 50000);
}

#[test]
fn grid_small_shape() {
    let out = run(&["grid", "--n-max", "10", "--a-max", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,A,madcd,jsd,heuristic_pass"));
    assert_eq!(lines.count(), 100);
    // N = 1 or A = 1 has no normal approximation: empty metric fields.
    assert!(text.contains("\n1,1,,,false\n"));
    assert!(String::from_utf8(out.stderr).unwrap().contains("max_madcd_in_region"));
}

#[test]
fn boundary_json() {
    let text = stdout(&["boundary", "--n-min", "1", "--n-max", "12", "--format", "json", "--timestamp", "t"]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0]["N"], 6);
}
