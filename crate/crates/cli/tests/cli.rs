use std::process::{Command, Output};

use serde_json::Value;
use steering_core::io::read_json;
use steering_core::model::SteeringFunctional;

fn steering(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steering")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn construct_random_functional_has_requested_shape() {
    let out = steering(&["construct", "--object", "random-functional", "--n", "4", "--seed", "7"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "steering-functional");
    assert_eq!(v["n"], 4);
    assert_eq!(v["d"], 5);
    assert!(stderr(&out).contains("sha256 "));
}

#[test]
fn construct_pauli_family_has_three_matrices_of_dim_eight() {
    let out = steering(&["construct", "--object", "pauli-family", "--m", "3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["matrices"].as_array().unwrap().len(), 3);
    assert_eq!(v["dim"], 8);
    assert_eq!(v["matrices"][0]["rows"], 8);
}

#[test]
fn emitted_functional_round_trips_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let p = path.to_str().unwrap();
    let out = steering(&["construct", "--object", "random-functional", "--n", "3", "--seed", "2", "--out", p]);
    assert!(out.status.success());
    let f: SteeringFunctional = read_json(&path).unwrap();
    let again = dir.path().join("g.json");
    std::fs::write(&again, serde_json::to_string_pretty(&f).unwrap() + "\n").unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
    let g: SteeringFunctional = read_json(&again).unwrap();
    assert_eq!(f, g);
}

#[test]
fn other_objects_construct() {
    for args in [
        &["construct", "--object", "schmidt-state", "--n", "3"][..],
        &["construct", "--object", "rho-lambda", "--n", "2", "--lambda-grid", "0.5"],
        &["construct", "--object", "dichotomic-functional", "--m", "2"],
        &["construct", "--object", "paper-povms", "--n", "3", "--seed", "1"],
    ] {
        let out = steering(args);
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
        stdout_json(&out);
    }
}

#[test]
fn same_config_gives_identical_hash() {
    let args = ["scaling", "--n", "2..3", "--seeds", "1,2", "--samples", "4"];
    let (a, b) = (steering(&args), steering(&args));
    assert!(a.status.success());
    let hash = |o: &Output| stderr(o).lines().find(|l| l.starts_with("sha256 ")).unwrap().to_string();
    assert_eq!(hash(&a), hash(&b));
    let rows = stdout_json(&a)["rows"].as_array().unwrap().len();
    assert_eq!(rows, 4);
}

#[test]
fn csv_output_has_header() {
    let out = steering(&["dichotomic", "--m", "1..2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("m,dim,b_c,witness_value"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn verify_only_runs_a_single_check() {
    let out = steering(&["verify", "--only", "eq6-identity"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = stdout_json(&out);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["id"], "eq6-identity");
    assert_eq!(v[0]["passed"], true);
    assert!(stderr(&out).contains("PASS [1] eq6-identity"));
}

#[test]
fn corrupted_tolerance_is_a_named_failure() {
    let out = steering(&["verify", "--only", "eq6-identity", "--tolerance-overrides", "eq6=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("FAIL [1] eq6-identity"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["scaling", "--bogus"][..],
        &["verify", "--only", "no-such-check"],
        &["verify", "--tolerance-overrides", "nope=1"],
        &["ppt", "--n", "7"],
        &["construct", "--object", "random-functional", "--format", "csv"],
    ] {
        assert_eq!(steering(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn invalid_povm_parameter_is_reported() {
    let out = steering(&["construct", "--object", "paper-povms", "--n", "12", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("K = 4 is too small"));
}
