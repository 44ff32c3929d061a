use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn stickysym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stickysym")).args(args).output().expect("run binary")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn symmetry_of_builtin_loop() {
    let r = json(&stickysym(&["symmetry", "--builtin", "loop:6", "--jobs", "1"]));
    assert_eq!(r["sigma"], 24);
    assert_eq!(r["counting_number"], 60);
    assert_eq!(r["automorphism_group"].as_array().unwrap().len(), 12);
    assert_eq!(r["options"]["path"]["tol"], 0.1);
}

#[test]
fn report_file_feeds_color_command() {
    let dir = tempdir().unwrap();
    let report = dir.path().join("oct.json");
    let out = stickysym(&["symmetry", "--builtin", "octahedron", "-o", report.to_str().unwrap()]);
    assert!(out.status.success());
    let colored = json(&stickysym(&["color", "--report", report.to_str().unwrap(), "--colors", "1,1,1,1,2,2"]));
    // Equator and poles distinguished: D4h, 16 operations.
    assert_eq!(colored["sigma"], 16);
    assert_eq!(colored["path_searches"], 0);
}

#[test]
fn radii_flag_and_file_input() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("tri.json");
    std::fs::write(
        &input,
        r#"{"positions": [[0,0,0],[1,0,0],[0.5,0.8660254037844386,0]], "radii": [0.5,0.5,0.5]}"#,
    )
    .unwrap();
    let r = json(&stickysym(&["symmetry", "--input", input.to_str().unwrap()]));
    assert_eq!(r["sigma"], 12);
    assert_eq!(r["counting_number"], 1);
}

#[test]
fn toy_path_with_csv_dump() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("toy.csv");
    let r = json(&stickysym(&[
        "path", "--builtin", "toy2d", "--tol", "0.2", "--sigma", "0.2", "--nr", "50", "--seed", "1", "--csv",
        csv.to_str().unwrap(),
    ]));
    assert_eq!(r["status"], "found");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("index,kind,y0,y1"));
    assert!(text.lines().count() > 10);
}

#[test]
fn toy_path_with_custom_endpoints() {
    let r = json(&stickysym(&["path", "--builtin", "toy2d", "--from", "-1,1", "--to", "1,1"]));
    assert_eq!(r["status"], "found");
}

#[test]
fn cluster_path_towards_an_element() {
    let r = json(&stickysym(&["path", "--builtin", "loop:5", "--element", "(12345)"]));
    assert_eq!(r["status"], "found");
}

#[test]
fn survey_enumeration_only() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("summary.csv");
    let r = json(&stickysym(&["survey", "--max-d", "7", "--no-symmetry", "--csv", csv.to_str().unwrap()]));
    assert_eq!(r["summary"]["total"], 99);
    assert!(csv.exists());
}

#[test]
fn exit_codes() {
    let dir = tempdir().unwrap();
    let overlap = dir.path().join("overlap.json");
    std::fs::write(&overlap, r#"{"positions": [[0,0,0],[0.5,0,0]], "radii": [0.5,0.5]}"#).unwrap();
    assert_eq!(stickysym(&["symmetry", "--input", overlap.to_str().unwrap()]).status.code(), Some(4));
    assert_eq!(stickysym(&["symmetry", "--input", "/nonexistent/cluster.json"]).status.code(), Some(3));
    assert_eq!(stickysym(&["path", "--builtin", "toy2d", "--from", "0,20"]).status.code(), Some(6));
    assert_eq!(stickysym(&["symmetry", "--builtin", "loop:4", "--colors", "1,1,2,2"]).status.code(), Some(0));
    let radii = dir.path().join("radii.json");
    std::fs::write(&radii, r#"{"positions": [[0,0,0],[1,0,0]], "radii": [0.6,0.4]}"#).unwrap();
    let report = dir.path().join("report.json");
    assert!(stickysym(&["symmetry", "--input", radii.to_str().unwrap(), "-o", report.to_str().unwrap()])
        .status
        .success());
    assert_eq!(stickysym(&["color", "--report", report.to_str().unwrap(), "--colors", "1,1"]).status.code(), Some(7));
    assert_eq!(stickysym(&["symmetry"]).status.code(), Some(2));
    assert_eq!(stickysym(&["symmetry", "--builtin", "cube"]).status.code(), Some(1));
}
