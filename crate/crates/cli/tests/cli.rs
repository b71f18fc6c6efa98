//! End-to-end checks of the binary: golden file bytes, exit codes, and the
//! JSON surface of each command.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_t3lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("t3lab-test-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

const FANO_GOLDEN: &str =
    "{\"format\":\"t3g-v1\",\"classes\":[2,2,2],\"edges\":[[0,0,0,1],[0,1,1,1],[1,0,1,1],[1,1,0,1]]}\n";

const P4_BMG: &str =
    "{\"format\":\"bmg-v1\",\"classes\":[2,2],\"edges\":[[0,0,1],[1,0,1],[1,1,1]]}\n";

const C10_BMG: &str = "{\"format\":\"bmg-v1\",\"classes\":[5,5],\"edges\":[[0,0,1],[0,4,1],[1,0,1],[1,1,1],[2,1,1],[2,2,1],[3,2,1],[3,3,1],[4,3,1],[4,4,1]]}\n";

const C4_BMG: &str =
    "{\"format\":\"bmg-v1\",\"classes\":[2,2],\"edges\":[[0,0,1],[0,1,1],[1,0,1],[1,1,1]]}\n";

#[test]
fn construct_fano_matches_golden_bytes() {
    let out = run(&["construct", "fano"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), FANO_GOLDEN);

    // Byte-identical across runs.
    let again = run(&["construct", "fano"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn analyze_fano_reports_paper_values() {
    let path = write_temp("fano.t3g", FANO_GOLDEN);
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["nu"], 1);
    assert_eq!(json["tau"], 2);
    assert_eq!(json["epsilon"], "0");
    assert_eq!(json["fano_components"], 1);
    assert_eq!(json["c4_components"]["A"], 1);
    assert_eq!(json["pass"], true);
}

#[test]
fn analyze_empty_instance_is_all_zero() {
    let path = write_temp(
        "empty.t3g",
        "{\"format\":\"t3g-v1\",\"classes\":[1,1,1],\"edges\":[]}\n",
    );
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["nu"], 0);
    assert_eq!(json["tau"], 0);
}

#[test]
fn analyze_hub_even_gadget_is_fano_free() {
    let built = run(&["construct", "thm53-even", "--r", "2"]);
    assert!(built.status.success());
    let path = write_temp("even2.t3g", &String::from_utf8_lossy(&built.stdout));
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["fano_components"], 0);
    assert_eq!(json["nu"], 2);
}

#[test]
fn eta_golden_outputs() {
    let p4 = write_temp("p4.bmg", P4_BMG);
    let out = run(&["eta", p4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["eta"], "1");
    assert_eq!(json["reduced_betti"], serde_json::json!([0, 1, 0]));

    let c10 = write_temp("c10.bmg", C10_BMG);
    for coeff in ["q", "f2", "z"] {
        let out = run(&["eta", c10.to_str().unwrap(), "--coeff", coeff]);
        assert_eq!(out.status.code(), Some(0), "coeff {coeff}");
        assert_eq!(stdout_json(&out)["eta"], "3", "coeff {coeff}");
    }

    // A single edge is an isolated line vertex.
    let single = write_temp(
        "single.bmg",
        "{\"format\":\"bmg-v1\",\"classes\":[1,1],\"edges\":[[0,0,1]]}\n",
    );
    let out = run(&["eta", single.to_str().unwrap()]);
    assert_eq!(stdout_json(&out)["eta"], "inf");
}

#[test]
fn verify_exit_codes() {
    let p4 = write_temp("p4v.bmg", P4_BMG);
    let out = run(&["verify", "thm3.1", p4.to_str().unwrap(), "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));

    // Precondition violation: a 2-regular C4 component.
    let c4 = write_temp("c4.bmg", C4_BMG);
    let out = run(&["verify", "thm3.1", c4.to_str().unwrap(), "--r", "2"]);
    assert_eq!(out.status.code(), Some(2));

    // cor3.8 admits the C4 component and passes.
    let out = run(&["verify", "cor3.8", c4.to_str().unwrap(), "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));

    // Unknown bound name.
    let out = run(&["verify", "thm9.9", c4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_t3g_bounds_on_extremal_instance() {
    let built = run(&["construct", "extremal", "--r", "2", "--n", "4"]);
    assert!(built.status.success());
    let path = write_temp("extremal.t3g", &String::from_utf8_lossy(&built.stdout));
    for name in ["thm1.2", "thm1.3", "thm2.2", "thm4.1", "thm4.2", "lem4.2", "lem4.3", "lem4.5", "lem4.6"] {
        let out = run(&["verify", name, path.to_str().unwrap(), "--r", "2"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "verify {name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(stdout_json(&out)["pass"], true, "verify {name}");
    }
}

#[test]
fn construct_check_flag_validates() {
    let out = run(&["construct", "thm53-odd", "--r", "3", "--check"]);
    assert_eq!(out.status.code(), Some(0));

    // Invalid parameters are input errors.
    let out = run(&["construct", "thm53-odd", "--r", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["construct", "extremal", "--r", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_spec_json_builds_mixtures() {
    let spec = r#"{"family":"mixture","parts":[{"family":"fano"},{"family":"parallel-triple","r":2}]}"#;
    let out = run(&["construct", "mixture", "--spec-json", spec]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let json: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(json["classes"], serde_json::json!([3, 3, 3]));
}

#[test]
fn search_is_deterministic_and_bounded() {
    let out = run(&["search", "--r", "2", "--n", "2", "--iters", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    // Every instance from the union-of-matchings model has nu = n.
    assert_eq!(json["best"]["nu"], 2);
    let again = run(&["search", "--r", "2", "--n", "2", "--iters", "40"]);
    assert_eq!(out.stdout, again.stdout);

    let none = run(&["search", "--r", "2", "--n", "2", "--iters", "0"]);
    assert_eq!(none.status.code(), Some(0));
    let json = stdout_json(&none);
    assert_eq!(json["evaluated"], 0);
    assert_eq!(json["best"], Value::Null);

    // akz mode keeps only simple instances and finds no counterexample.
    let akz = run(&[
        "search", "--r", "3", "--n", "3", "--iters", "30", "--target", "akz-counterexample",
    ]);
    assert_eq!(akz.status.code(), Some(0));
    let json = stdout_json(&akz);
    assert_eq!(json["candidates"], serde_json::json!([]));
}

#[test]
fn budget_env_controls_resources() {
    let path = write_temp("fano-budget.t3g", FANO_GOLDEN);
    let out = bin()
        .args(["analyze", path.to_str().unwrap()])
        .env("T3LAB_BUDGET", "matching_edges=2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let out = bin()
        .args(["analyze", path.to_str().unwrap()])
        .env("T3LAB_BUDGET", "nonsense")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_2() {
    let path = write_temp("bad.t3g", "not json\n");
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let wrong = write_temp(
        "wrong-format.t3g",
        "{\"format\":\"bmg-v1\",\"classes\":[1,1],\"edges\":[]}\n",
    );
    let out = run(&["analyze", wrong.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn round_trip_through_file_is_canonical() {
    // Non-canonical input: unsorted, split multiplicities.
    let messy = "{\"format\":\"t3g-v1\",\"classes\":[2,2,2],\"edges\":[[1,1,0,1],[0,0,0,1],[0,0,0,1],[0,1,1,2]]}\n";
    let path = write_temp("messy.t3g", messy);
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["nu"], 1);
}
