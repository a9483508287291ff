//! End-to-end tests of the binary: flags, exit codes, seed precedence, and
//! output formats.

use std::path::Path;
use std::process::{Command, Output};

fn qfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfc"))
        .args(args)
        .env_remove("QFEEDBACK_SEED")
        .output()
        .expect("binary runs")
}

fn qfc_with_env(args: &[&str], seed_env: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfc"))
        .args(args)
        .env("QFEEDBACK_SEED", seed_env)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write_teleport_config(dir: &Path, seed: Option<u64>) -> String {
    let seed_line = seed.map(|s| format!("\"seed\": {s},")).unwrap_or_default();
    let text = format!(
        r#"{{
            "scenario": "teleport",
            "initial_alpha": {{"re": 0.6, "im": 0.0}},
            "initial_beta": {{"re": 0.8, "im": 0.0}},
            "target": {{"alpha": {{"re": 1.0, "im": 0.0}}, "beta": {{"re": 0.0, "im": 0.0}}}},
            {seed_line}
            "cycles": 12
        }}"#
    );
    let path = dir.join("teleport.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn help_exits_zero() {
    let out = qfc(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unknown_subcommand_exits_one_with_usage() {
    let out = qfc(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Usage"));
}

#[test]
fn unknown_flag_exits_one() {
    let out = qfc(&["teleport-once", "--alpha-re", "1.0", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_config_file_exits_one() {
    let out = qfc(&["teleport-loop", "--config", "/nonexistent/nowhere.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nowhere.json"));
}

#[test]
fn scenario_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_teleport_config(dir.path(), Some(1));
    let out = qfc(&["clone-loop", "--config", &config]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("scenario"));
}

#[test]
fn teleport_once_reports_unit_fidelity() {
    let out = qfc(&["teleport-once", "--alpha-re", "0.6", "--beta-re", "0.8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("fidelity to input: 1.00000000"), "{text}");
    assert!(text.contains("outcome probability: 0.250000000"), "{text}");
}

#[test]
fn teleport_once_rejects_unnormalized_amplitudes() {
    let out = qfc(&["teleport-once", "--alpha-re", "0.9", "--beta-re", "0.9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn clone_fidelity_prints_both_routes() {
    let out = qfc(&["clone-fidelity", "--k", "2", "--samples", "500", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("analytic optimum (2K+1)/(3K): 0.833333333"), "{text}");
    assert!(text.contains("measured mean copy fidelity: 0.83"), "{text}");
}

#[test]
fn clone_fidelity_rejects_bad_counts() {
    assert_eq!(qfc(&["clone-fidelity", "--k", "1", "--samples", "10"]).status.code(), Some(1));
    assert_eq!(qfc(&["clone-fidelity", "--k", "9", "--samples", "10"]).status.code(), Some(1));
    assert_eq!(qfc(&["clone-fidelity", "--k", "2", "--samples", "0"]).status.code(), Some(1));
}

#[test]
fn recognize_gates_on_the_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let states = dir.path().join("states.json");
    std::fs::write(
        &states,
        r#"[
            {"alpha": {"re": 1.0, "im": 0.0}, "beta": {"re": 0.0, "im": 0.0}},
            {"alpha": {"re": 0.0, "im": 0.0}, "beta": {"re": 1.0, "im": 0.0}}
        ]"#,
    )
    .unwrap();
    let path = states.to_str().unwrap();

    let off = qfc(&["recognize", "--states", path, "--d0", "0.5"]);
    assert_eq!(off.status.code(), Some(0));
    assert!(stdout(&off).contains("signal: Off"));
    assert!(stdout(&off).contains("max distance: 0.707106781"));

    let on = qfc(&["recognize", "--states", path, "--d0", "0.8"]);
    assert!(stdout(&on).contains("signal: On"));

    let bad = qfc(&["recognize", "--states", path, "--d0", "0"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn loop_prints_csv_to_stdout_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_teleport_config(dir.path(), Some(4));
    let out = qfc(&["teleport-loop", "--config", &config]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with(
        "cycle,fidelity_to_target,bell_outcome,max_distance,gate_signal,actuator_applied\n"
    ));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn loop_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_teleport_config(dir.path(), Some(4));
    let out_path = dir.path().join("t.json");
    let out = qfc(&[
        "teleport-loop",
        "--config",
        &config,
        "--format",
        "json",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let records = qfc_core::trajectory::parse_json(&text).unwrap();
    assert_eq!(records.len(), 12);
    assert_eq!(records[0].cycle, 1);
}

#[test]
fn seed_flag_beats_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_teleport_config(dir.path(), None);
    let a = qfc_with_env(&["teleport-loop", "--config", &config, "--seed", "2"], "1");
    let b = qfc_with_env(&["teleport-loop", "--config", &config, "--seed", "2"], "3");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn environment_seed_fills_the_gap() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_teleport_config(dir.path(), None);
    let via_env = qfc_with_env(&["teleport-loop", "--config", &config], "5");
    let via_flag = qfc(&["teleport-loop", "--config", &config, "--seed", "5"]);
    assert_eq!(via_env.status.code(), Some(0));
    assert_eq!(stdout(&via_env), stdout(&via_flag));
}

#[test]
fn config_seed_beats_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_teleport_config(dir.path(), Some(7));
    let with_env = qfc_with_env(&["teleport-loop", "--config", &config], "8");
    let plain = qfc(&["teleport-loop", "--config", &config]);
    assert_eq!(stdout(&with_env), stdout(&plain));
}

#[test]
fn unwritable_output_path_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_teleport_config(dir.path(), Some(1));
    let out = qfc(&[
        "teleport-loop",
        "--config",
        &config,
        "--out",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
