use std::process::{Command, Output};

use serde_json::Value;

fn bdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bdlab")).args(args).env_remove("BD_LAB_THREADS").output().expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn constants_for_geometric_weights() {
    let v = json_stdout(&bdlab(&["constants", "--weights", "geometric:a=0.125"]));
    let close = |x: &Value, y: f64| (x.as_f64().unwrap() - y).abs() < 1e-10;
    assert!(close(&v["z"], 1.5));
    assert!(close(&v["rho"], 6.75));
    assert!(close(&v["sigma2"]["e"], 4.5));
    assert_eq!(v["regular_critical"], true);
    let meta = &v["meta"];
    assert_eq!(meta["config"]["weights"], "geometric:a=0.125");
    assert_eq!(meta["config_hash"].as_str().unwrap().len(), 64);
    assert!(!meta["version"].as_str().unwrap().is_empty());
}

#[test]
fn verify_bijections_prints_counts() {
    let out = bdlab(&["verify", "--suite", "bijections", "--max-n", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("boundary l=1 n=0 forests=1 maps=1 expected=1 ok"));
    assert!(text.contains("boundary l=2 n=2 "));
    assert!(text.contains("cvs n=4 trees=1134 "));
    assert_eq!(text.lines().last(), Some("pass"));
    assert_eq!(text.lines().filter(|l| l.starts_with("boundary")).count(), 15);
}

#[test]
fn sampling_is_byte_identical() {
    let args = ["sample", "--model", "quad", "--l", "10", "--n", "1000", "--seed", "7"];
    let a = bdlab(&args);
    let b = bdlab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let threaded = Command::new(env!("CARGO_BIN_EXE_bdlab")).args(args).env("BD_LAB_THREADS", "3").output().unwrap();
    assert_eq!(a.stdout, threaded.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["meta"]["seed"], 7);
    let map = &v["maps"][0];
    // 2n + l edges, 1002 + 10 + 1 vertices
    assert_eq!(map["map"]["half_edges"].as_array().unwrap().len(), 2 * (2 * 1000 + 10));
    assert_eq!(map["labels"].as_array().unwrap().len(), 1000 + 10 + 1);
    let other = bdlab(&["sample", "--model", "quad", "--l", "10", "--n", "1000", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn boltzmann_and_forest_samples() {
    let v = json_stdout(&bdlab(&[
        "sample", "--model", "boltzmann", "--weights", "2p:3", "--size-symbol", "F", "--n", "200", "--samples", "2",
    ]));
    assert_eq!(v["maps"].as_array().unwrap().len(), 2);
    assert!(v["l"].as_u64().unwrap() > 0);
    let f = json_stdout(&bdlab(&["sample", "--model", "forest", "--l", "3", "--n", "20"]));
    assert_eq!(f["forests"][0]["trees"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(bdlab(&["sample", "--bogus"]).status.code(), Some(2));
    assert_eq!(bdlab(&[]).status.code(), Some(2));
    assert_eq!(bdlab(&["constants", "--weights", "nonsense"]).status.code(), Some(2));
    // quadrangulation weights without the 1/12 normalisation are not admissible
    assert_eq!(bdlab(&["constants", "--weights", "delta:2=0.5"]).status.code(), Some(3));
    // hexangulations with n edges need n = l mod 3
    let infeasible = ["sample", "--model", "boltzmann", "--weights", "2p:3", "--size-symbol", "E", "--l", "1", "--n", "3"];
    assert_eq!(bdlab(&infeasible).status.code(), Some(3));
    assert_eq!(bdlab(&["verify", "--max-n", "9"]).status.code(), Some(2));
    assert_eq!(bdlab(&["--threads", "0", "constants"]).status.code(), Some(2));
}

#[test]
fn config_file_matches_flags() {
    let dir = std::env::temp_dir().join(format!("bdlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"command": "sample", "model": "quad", "l": 4, "n": 50, "seed": 3}"#).unwrap();
    let from_file = bdlab(&["--config", cfg.to_str().unwrap()]);
    let from_flags = bdlab(&["sample", "--l", "4", "--n", "50", "--seed", "3"]);
    assert!(from_file.status.success(), "{}", String::from_utf8_lossy(&from_file.stderr));
    assert_eq!(from_file.stdout, from_flags.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn artifacts_on_disk() {
    let dir = std::env::temp_dir().join(format!("bdlab-art-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let out = bdlab(&["continuum", "--grid", "256", "--samples", "2", "--seed", "5", "--out", d]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("disk_0001.csv")).unwrap();
    assert!(csv.starts_with("# version="));
    assert!(csv.lines().nth(1) == Some("i,j,dstar"));
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("disk_0000.json")).unwrap()).unwrap();
    assert_eq!(meta["metadata"]["m"], 256);
    assert_eq!(meta["meta"]["seed"], 5);

    let out = bdlab(&["sample", "--n", "30", "--l", "2", "--samples", "2", "--format", "pmap1", "--out", d]);
    assert!(out.status.success());
    let bytes = std::fs::read(dir.join("sample_0001.pmap1")).unwrap();
    let map = bdlab::map::read_pmap1(&bytes).unwrap();
    assert_eq!(map.num_edges(), 2 * 30 + 2);

    let out = bdlab(&["scaling", "--sizes", "64,128,256,512", "--samples", "20", "--seed", "1", "--out", d]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("scaling.csv")).unwrap();
    assert_eq!(csv.lines().nth(1), Some("statistic,n,value,samples,seed"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("scaling_run.json")).unwrap()).unwrap();
    assert!(report["fitted_exponent"]["slope"].is_f64());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scaling_diagnostics_to_stdout() {
    let v = json_stdout(&bdlab(&[
        "scaling", "--model", "boltzmann", "--size-symbol", "V", "--diagnostic", "perimeter", "--perimeters", "16", "--samples", "200",
    ]));
    assert_eq!(v["rows"][0]["l"], 16);
    let v = json_stdout(&bdlab(&["scaling", "--diagnostic", "universality", "--n", "256", "--samples", "50"]));
    assert!(v["report"]["ks"].as_f64().unwrap() <= 1.0);
    assert_eq!(v["seeds"][1], 1);
    assert_eq!(bdlab(&["scaling", "--diagnostic", "encoding"]).status.code(), Some(2));
}
