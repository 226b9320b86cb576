use std::path::PathBuf;
use std::process::{Command, Output};

fn cutlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutlab")).args(args).output().expect("spawn cutlab")
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = cutlab(&["gen", "--kind", "2ssp", "--seed", "7", "-o", p.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn sparsity_dist_on_antidiagonal() {
    let poly = fixtures().join("antidiagonal.json");
    let out = cutlab(&["sparsity", "dist", "--k", "1", "--polytope", poly.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    assert!(lines.next().unwrap().starts_with("instance,n,k,t,sq_dist"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("antidiagonal,2,1,2,1/2,"), "{row}");
    assert!(row.ends_with(",true"));
}

#[test]
fn verify_subset_with_fixtures_passes() {
    let dir = fixtures();
    let out = cutlab(&["verify-all", "--seed", "1", "--only", "1,2", "--fixtures", dir.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), text.lines().count());
    assert!(text.contains("fixture antidiagonal.json"));
}

#[test]
fn exit_code_follows_failures() {
    let out = cutlab(&["verify-all", "--seed", "1", "--only", "7"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let failed = text.lines().any(|l| l.starts_with("[FAIL]"));
    assert_eq!(out.status.code(), Some(if failed { 1 } else { 0 }), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cutlab(&["bogus"]).status.code(), Some(2));
    assert_eq!(cutlab(&["gomory", "-i", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(cutlab(&["gen", "--kind", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_report_carries_run_info() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let out = cutlab(&["verify-all", "--seed", "3", "--only", "9", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["run"]["seed"], 3);
    assert_eq!(v["run"]["command"], "verify-all");
    assert_eq!(v["result"]["pass"], true);
}
