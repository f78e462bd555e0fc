use std::path::PathBuf;
use std::process::{Command, Output};

use cyforge_core::DiffOperator;
use serde_json::Value;

fn cyforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyforge")).args(args).env_remove("CYFORGE_JOBS").output().expect("binary runs")
}

fn data(name: &str) -> String {
    cyforge_core::samples::data_dir().join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(stdout(o).trim()).unwrap()
}

fn op_text(rows: &[[i64; 5]]) -> String {
    DiffOperator::from_integer_rows(rows).unwrap().to_text()
}

const OP12: &[[i64; 5]] = &[
    [0, 0, 0, 0, 1],
    [-14, -106, -310, -408, -204],
    [1244, 5656, 9164, 6336, 1584],
    [-7840, -30576, -38416, -18816, -3136],
];
const OP13: &[[i64; 5]] = &[
    [0, 0, 0, 0, 1],
    [-12, -94, -282, -376, -180],
    [-768, -3736, -6820, -6080, -2256],
    [-4704, -23024, -40240, -30592, -9152],
    [-8640, -41472, -69888, -49152, -12288],
];

#[test]
fn analyze_quintic() {
    let v = json(&cyforge(&["analyze", &data("quintic_newton.vert"), "--json"]));
    assert_eq!(v["smoothable"], true);
    assert_eq!(v["hodge_smoothed"], serde_json::json!([1, 101]));
    assert_eq!(v["h_cubed"], 5);
    assert_eq!(v["c2_h"], 50);
}

#[test]
fn analyze_text_output() {
    let o = cyforge(&["analyze", &data("44a.laurent")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("hodge_smoothed: 1 45\n"), "{text}");
    assert!(text.contains("h_cubed: 144\n"));
}

#[test]
fn analyze_flags() {
    // as the dual, the quintic Newton polytope gives the mirror
    let v = json(&cyforge(&["analyze", &data("quintic_newton.vert"), "--json", "--dual"]));
    assert_eq!(v["hodge_resolved"], serde_json::json!([101, 1]));
    assert!(v.get("h_cubed").is_none());
    let v = json(&cyforge(&["analyze", &data("65.laurent"), "--json", "--multiplicity", "1"]));
    assert_eq!((v["h_cubed"].as_i64(), v["c2_h"].as_i64()), (Some(64), Some(112)));
    let o = cyforge(&["analyze", &data("65.laurent"), "--json", "--multiplicity", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["error"].as_str().unwrap().contains("H^3"));
}

#[test]
fn json_is_deterministic() {
    let a = cyforge(&["analyze", &data("48b.laurent"), "--json"]);
    let b = cyforge(&["analyze", &data("48b.laurent"), "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let keys: Vec<String> = json(&a).as_object().unwrap().keys().cloned().collect();
    assert_eq!(&keys[..4], ["source", "role", "vertices", "dual_vertices"]);
}

#[test]
fn period_inline() {
    let v = json(&cyforge(&["period", "--laurent", "t1 + t2 + t3 + t4 + 1/(t1*t2*t3*t4)", "--order", "10", "--json"]));
    assert_eq!(v["stride"], 5);
    assert_eq!(v["coefficients"][5], "120");
    assert_eq!(v["coefficients"][10], "113400");
}

#[test]
fn pf_fit_44() {
    let v = json(&cyforge(&["pf-fit", &data("44a.laurent"), "--order", "25", "--dmax", "4", "--json"]));
    assert_eq!(v["stride"], 2);
    assert_eq!(v["operator_text"], op_text(OP12));
}

#[test]
fn gw_from_operator() {
    let o = cyforge(&["gw", "--operator", &op_text(OP12), "--h3", "144", "--nmax", "7", "--json"]);
    let v = json(&o);
    let n: Vec<&str> = v["instantons"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(n, ["3744", "50112", "1656320", "77726016", "4505800320", "298578230016", "21713403010176"]);
}

#[test]
fn gw_from_file_computes_h3() {
    let v = json(&cyforge(&["gw", &data("p4_fan.vert"), "--nmax", "2", "--order", "10", "--json"]));
    assert_eq!(v["h3"], 5);
    assert_eq!(v["instantons"], serde_json::json!(["2875", "609250"]));
}

#[test]
fn transform_check() {
    let v = json(&cyforge(&[
        "transform-check", &op_text(OP12), &op_text(OP13), "--c", "4", "--h3", "144", "--nmax", "4", "--json",
    ]));
    assert_eq!(v["exponent"], "-1/2");
    assert_eq!(v["instantons_equal"], true);
    let o = cyforge(&["transform-check", &op_text(OP12), &op_text(OP13), "--c", "-4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn batch_is_independent_of_jobs() {
    let dir = cyforge_core::samples::data_dir().display().to_string();
    let one = cyforge(&["batch", &dir, "--jobs", "1", "--json"]);
    let four = cyforge(&["batch", &dir, "--jobs", "4", "--json"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let lines: Vec<Value> = stdout(&one).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), cyforge_core::samples::ALL.len());
    let names: Vec<&str> = lines.iter().map(|v| v["source"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn batch_isolates_failures() {
    let dir = std::env::temp_dir().join(format!("cyforge-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::copy(PathBuf::from(data("cross.vert")), dir.join("a.vert")).unwrap();
    std::fs::write(dir.join("b.laurent"), "t1^2^3").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cyforge"))
        .args(["batch", dir.to_str().unwrap(), "--json"])
        .env("CYFORGE_JOBS", "2")
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(o.status.code(), Some(1));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].get("error").is_none());
    assert!(lines[1]["error"].as_str().unwrap().contains("syntax error"));
}

#[test]
fn usage_errors() {
    assert_eq!(cyforge(&[]).status.code(), Some(2));
    assert_eq!(cyforge(&["period", "--order", "3"]).status.code(), Some(2));
    assert_eq!(cyforge(&["analyze", "/definitely/missing"]).status.code(), Some(2));
    assert_eq!(cyforge(&["gw", "--operator", "T^4", "--nmax", "2"]).status.code(), Some(2));
    assert_eq!(cyforge(&["transform-check", "T^4", "T^4", "--c", "x"]).status.code(), Some(2));
}

#[test]
fn domain_errors_name_the_file() {
    let o = cyforge(&["period", "--laurent", "t1 + t7", "--order", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--laurent"));
}
