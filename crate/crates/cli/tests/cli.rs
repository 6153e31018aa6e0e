use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fundclass"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_field(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, json).unwrap();
    path
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const Q2_SQRT2: &str = r#"{"p": 2, "f": 1, "eis_poly": [[-2], [0], [1]]}"#;

#[test]
fn lfc_unramified_quadratic_over_q3() {
    let dir = TempDir::new().unwrap();
    let field = write_field(&dir, "q9.json", r#"{"p": 3, "f": 2, "eis_poly": [[-3, 0], [1, 0]]}"#);
    let out = dir.path().join("u.json");
    let o = run(&["lfc", "--field", s(&field), "--k", "4", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dump = read(&out);
    let legend = dump["legend"].as_array().unwrap();
    let frob: Vec<u64> = legend.iter().map(|e| e["frob_power"].as_u64().unwrap()).collect();
    for entry in dump["table"].as_array().unwrap() {
        let (a, b) = (entry["sigma"].as_u64().unwrap() as usize, entry["tau"].as_u64().unwrap() as usize);
        let want = if frob[a] + frob[b] >= 2 { 1 } else { 0 };
        assert_eq!(entry["value"]["valuation"].as_i64().unwrap(), want);
        let digits = entry["value"]["digits"].as_array().unwrap();
        assert_eq!(digits[0].as_u64(), Some(1));
        assert!(digits[1..].iter().all(|d| d.as_u64() == Some(0)));
    }
    assert_eq!(dump["meta"]["k"].as_i64(), Some(4));
}

#[test]
fn lfc_trivial_field_has_one_entry() {
    let dir = TempDir::new().unwrap();
    let field = write_field(&dir, "q5.json", r#"{"p": 5, "f": 1, "eis_poly": [[-5], [1]]}"#);
    let o = run(&["lfc", "--field", s(&field), "--k", "3"]);
    assert!(o.status.success());
    let dump: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(dump["table"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let cube = write_field(&dir, "x3.json", r#"{"p": 3, "f": 1, "eis_poly": [[-3], [0], [0], [1]]}"#);
    assert_eq!(run(&["lfc", "--field", s(&cube), "--k", "4"]).status.code(), Some(2));
    let bad = write_field(&dir, "bad.json", r#"{"p": 3, "f": 1, "eis_poly": [[-9], [0], [1]]}"#);
    assert_eq!(run(&["lfc", "--field", s(&bad), "--k", "4"]).status.code(), Some(3));
    let q2 = write_field(&dir, "q2.json", Q2_SQRT2);
    assert_eq!(run(&["lfc", "--field", s(&q2), "--k", "200"]).status.code(), Some(4));
    let s3 = write_field(&dir, "s3.json", r#"{"p": 3, "f": 1, "eis_poly": [[3], [0], [0], [0], [0], [0], [1]]}"#);
    let o = run(&["verify", "--field", s(&s3), "--k", "2", "--checks", "compositum"]);
    assert_eq!(o.status.code(), Some(5));
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["lfc", "--field", s(&missing)]).status.code(), Some(1));
}

#[test]
fn verify_all_checks_on_ramified_quadratic() {
    let dir = TempDir::new().unwrap();
    let field = write_field(&dir, "q2.json", Q2_SQRT2);
    let out = dir.path().join("report.json");
    let o = run(&["verify", "--field", s(&field), "--k", "6", "--checks", "all", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read(&out);
    assert_eq!(r["pass"], Value::Bool(true));
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    let status = |name: &str| checks.iter().find(|c| c["name"] == name).unwrap()["status"].clone();
    for name in ["cocycle", "order", "compositum", "restriction"] {
        assert_eq!(status(name), "pass", "{name}");
    }
    assert_eq!(status("unramified-exact"), "skipped");
    let comp = checks.iter().find(|c| c["name"] == "compositum").unwrap();
    assert!(comp["witness"]["coboundary"].is_array());
    assert!(checks.iter().all(|c| c["millis"].is_number()));
}

#[test]
fn round_trip_and_corruption() {
    let dir = TempDir::new().unwrap();
    let field = write_field(&dir, "q2.json", Q2_SQRT2);
    let dump_path = dir.path().join("u.json");
    assert!(run(&["lfc", "--field", s(&field), "--k", "6", "--out", s(&dump_path)]).status.success());
    let o = run(&["verify", "--cocycle", s(&dump_path), "--checks", "cocycle,order"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["k"].as_i64(), Some(6));

    let mut dump = read(&dump_path);
    let table = dump["table"].as_array_mut().unwrap();
    let entry = table.iter_mut().find(|e| e["sigma"] == 0 && e["tau"] == 1).unwrap();
    let v = entry["value"]["valuation"].as_i64().unwrap();
    entry["value"]["valuation"] = Value::from(v + 1);
    entry["value"]["prec_abs"] = Value::from(entry["value"]["prec_abs"].as_i64().unwrap() + 1);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&dump).unwrap()).unwrap();
    let o = run(&["verify", "--cocycle", s(&bad), "--checks", "cocycle"]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["pass"], Value::Bool(false));
    let c = &r["checks"][0];
    assert_eq!(c["status"], "fail");
    assert_eq!(c["witness"]["triple"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let field = write_field(&dir, "c3.json", r#"{"p": 3, "f": 1, "eis_poly": [[3], [9], [6], [1]]}"#);
    let a = run(&["lfc", "--field", s(&field), "--k", "5"]);
    let b = run(&["lfc", "--field", s(&field), "--k", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn catalog_runs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("summary.json");
    let o = run(&["catalog", "--primes", "3", "--max-degree", "2", "--k", "4", "--jobs", "2", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read(&out);
    let entries = r["entries"].as_array().unwrap();
    assert!(entries.len() >= 4);
    assert!(entries.iter().all(|e| e["pass"] == Value::Bool(true) && e["p"] == 3));
    let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);

    let empty = write_field(&dir, "empty.json", r#"{"entries": []}"#);
    let o = run(&["catalog", "--field", s(&empty)]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["total"], 0);
    assert!(r["entries"].as_array().unwrap().is_empty());
}

#[test]
fn catalog_guard_is_recorded_per_check() {
    let dir = TempDir::new().unwrap();
    let cat = write_field(
        &dir,
        "s3.json",
        r#"{"entries": [{"name": "s3", "group": "S3",
            "field": {"p": 3, "f": 1, "eis_poly": [[3], [0], [0], [0], [0], [0], [1]]}}]}"#,
    );
    let o = run(&["catalog", "--field", s(&cat), "--k", "2", "--checks", "cocycle,compositum"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = r["entries"][0]["checks"].as_array().unwrap();
    assert_eq!(checks[0]["status"], "pass");
    assert_eq!(checks[1]["status"], "skipped");
}

#[test]
fn selftest_passes_and_is_seeded() {
    let a = run(&["selftest", "--seed", "7"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["seed"], 7);
    assert_eq!(r["pass"], Value::Bool(true));
}

#[test]
fn rejects_bad_arguments() {
    assert_ne!(run(&["lfc", "--field", "x.json", "--k", "0"]).status.code(), Some(0));
    let dir = TempDir::new().unwrap();
    let field = write_field(&dir, "q2.json", Q2_SQRT2);
    assert_eq!(run(&["verify", "--field", s(&field), "--checks", "bogus"]).status.code(), Some(1));
}
