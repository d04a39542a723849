use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_btorders"));
    c.env_remove("BTORDERS_JOBS");
    c
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn run(args: &[&str], file: &Path) -> Output {
    bin().args(args).arg(file).output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn k2() -> Value {
    json!({"p": 2, "g": null})
}

fn j1(n: u32) -> Value {
    let pn = 2i64.pow(n).to_string();
    json!({"field": k2(), "generators": [[["1","0"],["0","0"]], [["0","1"],["0","0"]], [["0","0"],[pn,"0"]]]})
}

fn j3() -> Value {
    json!({"field": k2(), "generators": [[["2","1"],["-2","0"]], [["2","0"],["0","0"]], [["0","0"],["4","0"]]]})
}

#[test]
fn classify_eichler() {
    let dir = TempDir::new().unwrap();
    let o = run(&["classify"], &write(&dir, "j1.json", &j1(2)));
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["bass"], json!(true));
    assert_eq!(v["eichler"], json!({"level": 2}));
    assert_eq!(v["classification"]["type"], json!("eichler"));
    assert_eq!(v["disc_valuation"], json!(2));
}

#[test]
fn classify_scaled_order() {
    let dir = TempDir::new().unwrap();
    let gens = json!([
        [["2", "0"], ["0", "0"]],
        [["0", "2"], ["0", "0"]],
        [["0", "0"], ["2", "0"]]
    ]);
    let o = run(
        &["classify"],
        &write(&dir, "s.json", &json!({"field": k2(), "generators": gens})),
    );
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["gorenstein"]["r"], json!(1));
    assert_eq!(v["bass"], json!(false));
    assert_eq!(v["classification"], Value::Null);
}

#[test]
fn report_round_trips() {
    let dir = TempDir::new().unwrap();
    let first = stdout_json(&run(&["classify"], &write(&dir, "a.json", &j3())));
    let second = stdout_json(&run(&["classify"], &write(&dir, "b.json", &first)));
    assert_eq!(first, second);
    assert_eq!(first["classification"]["type"], json!("E2"));
}

#[test]
fn parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = json!({"field": k2(), "generators": [[["1/0","0"],["0","0"]]]});
    let o = run(&["classify"], &write(&dir, "bad.json", &bad));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout_json(&o)["error"]["kind"], json!("Parse"));
    assert!(!o.stderr.is_empty());
    let p = dir.path().join("junk.json");
    std::fs::write(&p, "{not json").unwrap();
    assert_eq!(run(&["classify"], &p).status.code(), Some(2));
}

#[test]
fn non_orders_exit_3() {
    let dir = TempDir::new().unwrap();
    let frac = json!({"field": k2(), "generators": [[["1/2","0"],["0","0"]]]});
    let o = run(&["classify"], &write(&dir, "f.json", &frac));
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout_json(&o)["error"]["kind"], json!("NonIntegral"));
    let thin = json!({"field": k2(), "generators": [[["0","1/2"],["0","0"]]]});
    let o = run(&["classify"], &write(&dir, "t.json", &thin));
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout_json(&o)["error"]["kind"], json!("NotFull"));
}

#[test]
fn branch_dot_window() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "d.json",
        &json!({"field": k2(), "matrix": [["0","0"],["0","2"]]}),
    );
    let a = run(&["branch", "--radius", "2", "--format", "dot"], &f);
    assert!(a.status.success());
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("label=")).count(), 10);
    assert_eq!(text.matches("style=filled").count(), 8);
    let b = bin()
        .args(["branch", "--radius", "2", "--format", "dot", "--jobs", "3"])
        .arg(&f)
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let c = bin()
        .args(["branch", "--radius", "2", "--format", "dot"])
        .env("BTORDERS_JOBS", "4")
        .arg(&f)
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
    let out = dir.path().join("w.dot");
    let o = bin()
        .args(["branch", "--radius", "2", "--format", "dot", "-o"])
        .arg(&out)
        .arg(&f)
        .output()
        .unwrap();
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn branch_descriptors() {
    let dir = TempDir::new().unwrap();
    let nil = write(
        &dir,
        "n.json",
        &json!({"field": k2(), "matrix": [["0","1"],["0","0"]]}),
    );
    let v = stdout_json(&run(&["branch", "--radius", "3"], &nil));
    assert_eq!(v["descriptor"]["kind"], json!("foliage"));
    let v = stdout_json(&run(
        &["branch", "--radius", "3"],
        &write(&dir, "j.json", &j1(1)),
    ));
    assert_eq!(v["descriptor"]["kind"], json!("tube"));
    assert_eq!(v["descriptor"]["stem"]["type"], json!("finite"));
    assert_eq!(v["descriptor"]["stem"]["length"], json!(1));
    assert_eq!(v["window"]["members"].as_array().unwrap().len(), 2);
    let o = run(&["branch", "--radius", "7"], &nil);
    assert_eq!(o.status.code(), Some(2));
    let big = write(
        &dir,
        "b.json",
        &json!({"field": {"p": 7, "g": null}, "matrix": [["0","1"],["0","0"]]}),
    );
    assert_eq!(
        run(&["branch", "--radius", "1"], &big).status.code(),
        Some(2)
    );
}

#[test]
fn ghost_construct_and_verify() {
    let dir = TempDir::new().unwrap();
    let o = run(&["ghost", "construct"], &write(&dir, "j3.json", &j3()));
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["ghost"], json!(true));
    let pres = v["presentation"].clone();
    assert_eq!(pres["verified"], json!(true));
    let o = run(&["ghost", "verify"], &write(&dir, "p.json", &pres));
    assert!(o.status.success());

    let mut wrong = pres.clone();
    let vs = wrong["vertices"].as_array_mut().unwrap();
    vs.pop();
    let o = run(
        &["ghost", "verify"],
        &write(&dir, "w.json", &json!({"presentation": wrong})),
    );
    assert_eq!(o.status.code(), Some(5));
    assert_eq!(stdout_json(&o)["verified"], json!(false));
}

#[test]
fn eichler_presentation_is_over_base() {
    let dir = TempDir::new().unwrap();
    let v = stdout_json(&run(
        &["ghost", "construct"],
        &write(&dir, "e.json", &j1(3)),
    ));
    assert_eq!(v["presentation"]["extension"], k2());
    assert_eq!(v["presentation"]["vertices"].as_array().unwrap().len(), 2);
    let scaled = json!({"field": k2(), "generators": [[["2","0"],["0","0"]], [["0","2"],["0","0"]], [["0","0"],["2","0"]]]});
    let v = stdout_json(&run(
        &["ghost", "construct"],
        &write(&dir, "s.json", &scaled),
    ));
    assert_eq!(v["ghost"], json!(true));
    assert_eq!(v["exponent"], json!(1));
}

#[test]
fn closure_output() {
    let dir = TempDir::new().unwrap();
    let scaled = json!({"field": k2(), "generators": [[["2","0"],["0","0"]], [["0","2"],["0","0"]], [["0","0"],["4","0"]]]});
    let v = stdout_json(&run(&["closure"], &write(&dir, "s.json", &scaled)));
    assert_eq!(v["r"], json!(1));
    let c = stdout_json(&run(&["classify"], &write(&dir, "c.json", &v["closure"])));
    assert_eq!(c["eichler"], json!({"level": 1}));
}

#[test]
fn selftest_quick_and_tampered() {
    let o = bin().args(["selftest", "--quick"]).output().unwrap();
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["criteria"].as_array().unwrap().len(), 12);

    let dir = TempDir::new().unwrap();
    let mut golden: Value =
        serde_json::from_str(include_str!("../../core/fixtures/golden.json")).unwrap();
    golden["dihedral"]["classification"] = json!("E1");
    let f = write(&dir, "golden.json", &golden);
    let o = bin()
        .args(["selftest", "--quick", "--fixtures"])
        .arg(&f)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("FAIL criterion 11 dihedral"));
    assert!(err.contains("failing criteria: 11 dihedral"));
}
