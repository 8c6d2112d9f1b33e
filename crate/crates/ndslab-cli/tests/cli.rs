//! End-to-end tests of the `ndslab` binary: subcommand behavior, exit
//! codes, byte determinism, and the spec-file round trip.

use std::process::{Command, Output};

use ndslab_core::gallery::{build_scenario, ScenarioParams};
use ndslab_core::sequence::MapSequence;

fn ndslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ndslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn list_names_all_scenarios() {
    let out = ndslab(&["list"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for id in [
        "tent_auto",
        "example_ii",
        "example_iii",
        "example_iv",
        "example_v",
        "theorem4",
        "uc_detour",
    ] {
        assert!(text.lines().any(|l| l == id), "missing {id}");
    }
}

#[test]
fn classify_reports_the_two_cycle() {
    let out = ndslab(&[
        "classify",
        "--system",
        "theorem4",
        "--point",
        "1/2",
        "--def",
        "5",
        "--horizon",
        "500",
        "--r-max",
        "2",
        "--eps",
        "1/100",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["definition"], 5);
    assert_eq!(v["status"], "consistent_up_to");
    assert_eq!(v["r"], 2);
    assert_eq!(v["cycle"][0], "1/1");
    assert_eq!(v["cycle"][1], "0/1");
    let rows = v["eps_table"].as_array().unwrap();
    assert!(rows.iter().any(|row| row[0] == "1/100" && row[1] == 50));
}

#[test]
fn classify_def1_on_example_iii() {
    let out = ndslab(&[
        "classify",
        "--system",
        "example_iii",
        "--point",
        "2/3",
        "--def",
        "1",
        "--horizon",
        "100",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "holds_exactly");
    assert_eq!(v["r"], 1);
}

#[test]
fn run_scenario_exits_zero_when_expectations_pass() {
    let out = ndslab(&["run", "uc_detour"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["scenario"], "uc_detour");
    assert_eq!(v["all_passed"], true);
    assert!(v["expectations"].as_array().unwrap().len() >= 4);
}

#[test]
fn usage_errors_exit_two() {
    // Floats are rejected by the exactness policy.
    let out = ndslab(&[
        "classify",
        "--system",
        "theorem4",
        "--point",
        "0.5",
        "--def",
        "5",
    ]);
    assert_eq!(code(&out), 2);
    // Unknown scenario id.
    let out = ndslab(&["run", "not_a_scenario"]);
    assert_eq!(code(&out), 2);
    // Out-of-range definition selector.
    let out = ndslab(&[
        "classify",
        "--system",
        "theorem4",
        "--point",
        "1/2",
        "--def",
        "9",
    ]);
    assert_eq!(code(&out), 2);
    // Unknown flag is a clap usage error.
    let out = ndslab(&["classify", "--nonsense"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn sharkovsky_comparator() {
    let out = ndslab(&["sharkovsky", "6", "4"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["l_precedes_m"], true);
    assert_eq!(v["m_precedes_l"], false);

    let out = ndslab(&["sharkovsky", "1", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["l_precedes_m"], false);
    assert_eq!(v["m_precedes_l"], true);
}

#[test]
fn convergence_table_csv() {
    let out = ndslab(&["convergence", "--n-max", "10"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,distance");
    assert_eq!(lines[1], "1,1/4");
    assert_eq!(lines[10], "10,1/13");
}

#[test]
fn trajectory_csv_rows() {
    let out = ndslab(&[
        "trajectory",
        "--system",
        "theorem4",
        "--point",
        "1/2",
        "--horizon",
        "10",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,value_num,value_den,value_approx");
    assert!(lines[6].starts_with("5,1,12,"));

    let out = ndslab(&[
        "trajectory",
        "--system",
        "tent_auto",
        "--point",
        "2/5",
        "--horizon",
        "4",
    ]);
    let text = stdout(&out);
    let values: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(values, vec!["2", "4", "2", "4", "2"]);
}

#[test]
fn probe_transitivity_json() {
    let out = ndslab(&[
        "probe",
        "--system",
        "tent_auto",
        "--kind",
        "transitivity",
        "--grid",
        "8",
        "--horizon",
        "20",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["kind"], "transitivity");
    assert_eq!(v["outcome"], "evidenced");
}

#[test]
fn matrix_modes() {
    let out = ndslab(&["matrix", "--mode", "uniform"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mode"], "uniformly_convergent");
    // Row 4 gains arrows to 5 and 1 but not to 2.
    assert_eq!(v["entries"][3][4], true);
    assert_eq!(v["entries"][3][0], true);
    assert_eq!(v["entries"][3][1], false);
    assert_eq!(v["witnesses"]["4->2"], "uc_detour");
}

#[test]
fn outputs_are_byte_deterministic() {
    let args = [
        "classify",
        "--system",
        "theorem4",
        "--point",
        "2/3",
        "--def",
        "5",
        "--horizon",
        "300",
    ];
    let a = ndslab(&args);
    let b = ndslab(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), 0);

    let a = ndslab(&["export", "example_v"]);
    let b = ndslab(&["export", "example_v"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn export_and_reingest_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("system.json");

    let out = ndslab(&["export", "theorem4"]);
    assert_eq!(code(&out), 0);
    let exported: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    std::fs::write(&spec_path, serde_json::to_string(&exported["system"]).unwrap()).unwrap();

    // The re-ingested system produces identical maps.
    let original = build_scenario("theorem4", &ScenarioParams::default())
        .unwrap()
        .system;
    let reloaded = MapSequence::from_spec_json(&exported["system"]).unwrap();
    for n in 1..=10 {
        assert_eq!(original.map_at(n).unwrap(), reloaded.map_at(n).unwrap());
    }

    // And identical verdicts through the CLI.
    let from_id = ndslab(&[
        "classify",
        "--system",
        "theorem4",
        "--point",
        "1/2",
        "--def",
        "5",
        "--horizon",
        "400",
    ]);
    let from_file = ndslab(&[
        "classify",
        "--system",
        spec_path.to_str().unwrap(),
        "--point",
        "1/2",
        "--def",
        "5",
        "--horizon",
        "400",
    ]);
    assert_eq!(from_id.stdout, from_file.stdout);
    assert_eq!(code(&from_file), 0);

    // Same round trip for an eventually-constant scenario.
    let out = ndslab(&["export", "example_iii"]);
    let exported: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let original = build_scenario("example_iii", &ScenarioParams::default())
        .unwrap()
        .system;
    let reloaded = MapSequence::from_spec_json(&exported["system"]).unwrap();
    for n in 1..=5 {
        assert_eq!(original.map_at(n).unwrap(), reloaded.map_at(n).unwrap());
    }
}
