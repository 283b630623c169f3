use std::path::PathBuf;
use std::process::{Command, Output};

fn turan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turan")).args(args).output().expect("run turan")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

#[test]
fn blowup_of_tripartite_pattern() {
    let o = turan(&["blowup", "--pattern", "parts=3; weights=1/3,1/3,1/3; edges=112,223,331,123", "--target", "K4-"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "16/27");
}

#[test]
fn density_of_a_graph_in_itself_is_one() {
    let o = turan(&["density", "--target", "4.2", "--graph", "5:123,234,345,145,125"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn structured_output_is_json() {
    let o = turan(&["--format", "structured", "density", "--target", "edge", "--graph", "4:123,124"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["density"], "1/2");
    assert_eq!(v["count"], 2);
}

#[test]
fn shipped_certificate_verifies() {
    let cert = data("triangle_free.cert");
    let prob = data("triangle_free.prob");
    let o = turan(&["verify", "--cert", cert.to_str().unwrap(), "--problem", prob.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("valid: certified bound 1/2"));
}

#[test]
fn tampered_certificate_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("triangle_free.cert")).unwrap();
    let mut cert: serde_json::Value = serde_json::from_str(&text).unwrap();
    cert["q_matrices"][0][0][0] = serde_json::Value::from("-1/2");
    let path = dir.path().join("bad.cert");
    std::fs::write(&path, cert.to_string()).unwrap();
    let prob = data("triangle_free.prob");
    let o = turan(&["verify", "--cert", path.to_str().unwrap(), "--problem", prob.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not positive semi-definite"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(turan(&["blowup", "--target", "edge"]).status.code(), Some(2));
    assert_eq!(turan(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn bad_input_exits_one() {
    let o = turan(&["density", "--target", "edge", "--graph", "4:12x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn export_writes_a_problem_that_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tf.dat-s");
    let o = turan(&["sdp-export", "-o", "3", "--arity", "2", "--forbid", "3:12,13,23", "--target", "2:12", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("prob")).unwrap()).unwrap();
    let shipped: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(data("triangle_free.prob")).unwrap()).unwrap();
    assert_eq!(written, shipped);
    assert!(std::fs::read_to_string(&out).unwrap().lines().any(|l| l.trim() == "0 2 4"));
}

#[test]
fn oracle_sequence() {
    let o = turan(&["oracle", "--target", "K4-", "--forbid", "K4", "--range", "4..5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n=4: 1\nn=5: 4/5\n");
}

#[test]
fn enumerate_counts_graphs() {
    let o = turan(&["enumerate", "-o", "4", "--arity", "3", "--count"]);
    assert_eq!(stdout(&o).trim(), "5 classes");
    let o = turan(&["enumerate", "-o", "4", "--arity", "2", "--forbid", "3:12,13,23", "--count"]);
    assert_eq!(stdout(&o).trim(), "7 classes");
}

#[test]
fn geometric_exact_distribution() {
    let o = turan(&["--format", "structured", "geometric", "--exact", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let probs: Vec<&str> = v["distribution"].as_array().unwrap().iter().map(|r| r["probability"].as_str().unwrap()).collect();
    assert!(probs.contains(&"3/4"));
}

#[test]
fn reproduce_prints_library_values() {
    let o = turan(&["--format", "structured", "reproduce", "-c", "1", "-c", "4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let opts = turan_core::reproduce::ReproduceOptions { solver: None, work_dir: None };
    let lib: Vec<String> = [1, 4].iter().flat_map(|&c| turan_core::reproduce::run_criterion(c, &opts)).map(|r| r.computed).collect();
    let cli: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["computed"].as_str().unwrap()).collect();
    assert_eq!(cli, lib);
    assert_eq!(v["all_passed"], true);
}

#[test]
fn unknown_criterion_is_an_error() {
    assert_eq!(turan(&["reproduce", "-c", "12"]).status.code(), Some(1));
}
