use std::process::{Command, Output};

use serde_json::Value;

fn hgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgeo")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let out = hgeo(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "hgeo/1");
    v
}

#[test]
fn symbol_coefficient_table() {
    let v = json(&["symbol", "blaschke:[0.5]", "--coeffs", "8"]);
    let c = v["result"]["coefficients"].as_array().unwrap();
    assert_eq!(c.len(), 8);
    for (row, want) in c.iter().zip([0.5, -0.75, -0.375]) {
        assert!((row["re"].as_f64().unwrap() - want).abs() < 1e-12);
    }
    let v = json(&["symbol", "chi:0"]);
    assert_eq!(v["result"]["coefficients"][0]["re"], 1.0);
    assert_eq!(v["result"]["invertibility"]["verdict"], "invertible");
}

#[test]
fn symbol_error_paths() {
    assert_eq!(hgeo(&["symbol", "sing:[(0,1)]", "--at", "0"]).status.code(), Some(3));
    let out = hgeo(&["symbol", "chi:1*foo"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 6"));
    assert_eq!(hgeo(&["symbol", "blaschke:[1.5]"]).status.code(), Some(2));
}

#[test]
fn index_examples() {
    assert_eq!(json(&["index", "chi:3"])["result"]["consensus"]["agreed"], 3);
    assert_eq!(json(&["index", "blaschke:[0.5,0.3]"])["result"]["consensus"]["agreed"], 2);
    let out = hgeo(&["index", "fourier:[1,0,1]"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not invertible"));
}

#[test]
fn geodesic_examples() {
    let v = json(&["geodesic", "chi:1", "blaschke:[0.5]", "-n", "128"]);
    let r = &v["result"];
    assert_eq!(r["verdict"]["verdict"], "geodesic_exists_unique_minimal");
    assert!((r["length_op"].as_f64().unwrap() - std::f64::consts::FRAC_PI_6).abs() < 1e-4);

    let v = json(&["geodesic", "chi:0", "chi:1", "-n", "64"]);
    assert_eq!(v["result"]["verdict"]["verdict"], "obstructed");
    assert_eq!(v["result"]["verdict"]["ran_p_ker_q"], 1);
    assert_eq!(v["result"]["verdict"]["ran_q_ker_p"], 0);

    let v = json(&["geodesic", "chi:1", "chi:1", "-n", "32"]);
    assert_eq!(v["result"]["length_op"], 0.0);
}

#[test]
fn geodesic_path_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.csv");
    let out = hgeo(&["geodesic", "chi:1", "blaschke:[0.5]", "-n", "32", "--samples", "5", "--csv", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,idempotency_defect,dist_to_start,dist_to_end");
    assert_eq!(lines.len(), 6);
}

#[test]
fn sweep_examples() {
    let v = json(&["sweep", "chi:-1", "--sizes", "8,16,32"]);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["kernel_dim"] == 1));

    let v = json(&["sweep", "chi:1", "blaschke:[0.5]", "--sizes", "64,128,256"]);
    let last = v["result"]["rows"].as_array().unwrap().last().unwrap().clone();
    assert!((last["s_min"].as_f64().unwrap() - 0.8660).abs() < 1e-4);

    let v = json(&["sweep", "blaschke:[0.5]", "--kind", "hankel", "--p", "2", "--sizes", "8,16,32"]);
    for (_, rows) in v["result"]["schatten"].as_array().unwrap().iter().map(|x| (x[0].clone(), x[1].clone())) {
        assert!(rows.as_array().unwrap().iter().all(|r| r["norm"] == 0.0));
    }
}

#[test]
fn classify_examples() {
    let v = json(&["classify", "blaschke:[0.5]*blaschke:[0.3]", "--sizes", "16,32,64"]);
    assert_eq!(v["result"]["in_gr_res"], true);
    assert_eq!(v["result"]["component"], -2);
    let v = json(&["classify", "sing:[(0,1)]", "--sizes", "16,32,64"]);
    assert_eq!(v["result"]["in_gr_res"], false);
    assert_eq!(v["result"]["inner_class"]["class"], "essential_class_e1");
}

#[test]
fn json_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("r{i}.json"))).collect();
    for p in &paths {
        let out = hgeo(&["geodesic", "chi:1", "blaschke:[0.3]", "-n", "32", "--json", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
}

#[test]
fn seeded_random_symbol_is_reproducible() {
    let a = hgeo(&["symbol", "--random-blaschke", "3", "--seed", "5"]);
    let b = hgeo(&["symbol", "--random-blaschke", "3", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_configuration_is_rejected() {
    assert_eq!(hgeo(&["-n", "4", "index", "chi:1"]).status.code(), Some(3));
    assert_eq!(hgeo(&["--sizes", "32,16", "index", "chi:1"]).status.code(), Some(3));
    assert_eq!(hgeo(&["nonsense"]).status.code(), Some(2));
}
