use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const LINE: &str = r#"{"vars":["x","y"],"terms":[
  {"exp":[1,0],"coeff":{"mod":1,"phase":{"turns":"0"}}},
  {"exp":[0,1],"coeff":{"mod":1,"phase":{"turns":"0"}}},
  {"exp":[0,0],"coeff":{"terms":[{"gamma":"1","mod":1,"phase":{"turns":"0"}}]}}
]}"#;

const LINE_DESC: &str = r#"{"rank":2,"factors":[{"A":[[1,0],[0,1]],"shift":[{"turns":"0"},{"turns":"0"}]}]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasetrop")).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn nvol_of_the_curve_matrix() {
    let o = run(&["nvol", "--matrix", "2,1;1,2"]);
    assert!(o.status.success());
    assert_eq!(json(&o), Value::from(3));

    let o = run(&["nvol", "--matrix", "1,2;2,4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not linearly independent"));
}

#[test]
fn reduction_at_the_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "line.json", LINE);
    let o = run(&["reduce", &f, "--w", "1,1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["terms"].as_array().unwrap().len(), 3);

    // off the tropical line only one term survives
    let o = run(&["reduce", &f, "--w", "0,2"]);
    assert_eq!(json(&o)["terms"].as_array().unwrap().len(), 1);

    let o = run(&["reduce", &f, "--w", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn trop_lists_four_faces() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "line.json", LINE);
    let o = run(&["trop", &f]);
    assert!(o.status.success());
    assert_eq!(json(&o)["faces"].as_array().unwrap().len(), 4);
}

#[test]
fn membership_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "desc.json", LINE_DESC);
    let inside = run(&["coamoeba", "member", &d, "--theta", "1/4,1/2"]);
    assert_eq!(inside.status.code(), Some(0));
    assert_eq!(json(&inside)["member"], Value::Bool(true));
    let outside = run(&["coamoeba", "member", &d, "--theta", "1/8,-1/8"]);
    assert_eq!(outside.status.code(), Some(2));
    assert_eq!(json(&outside)["member"], Value::Bool(false));
    let wrong_rank = run(&["coamoeba", "member", &d, "--theta", "0"]);
    assert_eq!(wrong_rank.status.code(), Some(1));
}

#[test]
fn nca_and_ptrop_on_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "line.json", LINE);
    let built = run(&["nca", "build", &f]);
    assert!(built.status.success());
    let v = json(&built);
    assert_eq!(v["model"]["rank"], Value::from(2));
    assert_eq!(v["dimensions"]["max_sum"], Value::from(2));

    assert_eq!(run(&["nca", "member", &f, "--theta", "1/2,1/4"]).status.code(), Some(0));
    assert_eq!(run(&["nca", "member", &f, "--theta", "1/8,-1/8"]).status.code(), Some(2));
    // on the ray x = 0 with y large only the x-free binomial matters
    assert_eq!(run(&["ptrop", "member", &f, "--w", "1,3", "--theta", "1/2,0"]).status.code(), Some(0));
    assert_eq!(run(&["ptrop", "member", &f, "--w", "1,3", "--theta", "0,0"]).status.code(), Some(2));
}

#[test]
fn pullback_model_from_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "line.json", LINE);
    let o = run(&["nca", "build", &f, "--pullback", "2,1;1,2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["nca", "build", &f, "--pullback", "1,1;2,2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("line.svg");
    let o = run(&["render", "--out", out.to_str().unwrap(), "--res", "16"]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn verify_checks_pass() {
    assert!(run(&["verify", "prop6", "--res", "16"]).status.success());
    assert!(run(&["verify", "samples", "--count", "50", "--seed", "7"]).status.success());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["reduce"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
