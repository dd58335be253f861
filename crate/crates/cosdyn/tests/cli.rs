//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cosdyn::scenarios::load_system;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cosdyn"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should launch")
}

struct Fixture {
    _dir: tempfile::TempDir,
    system: PathBuf,
    isometry: PathBuf,
    mu: PathBuf,
    nu: PathBuf,
    root: PathBuf,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let system = root.join("system.json");
    let output = run(&["example", "--out", system.to_str().unwrap()]);
    assert!(output.status.success());

    let isometry = root.join("isometry.json");
    fs::write(
        &isometry,
        r#"{"alpha": {"kind": "translation", "b": 1.0},
            "weight": {"breakpoints": [], "left_tail": 1.0, "right_tail": 1.0}}"#,
    )
    .unwrap();

    let mu = root.join("mu.json");
    fs::write(&mu, r#"{"atoms": [[-2.0, 1.0]]}"#).unwrap();
    let nu = root.join("nu.json");
    fs::write(&nu, r#"{"atoms": [[2.0, 1.0]]}"#).unwrap();

    Fixture {
        _dir: dir,
        system,
        isometry,
        mu,
        nu,
        root,
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn example_output_is_loadable() {
    let fx = fixture();
    let sys = load_system(&fx.system).unwrap();
    assert_eq!(sys.weight.value(0.0), 3.0);
    assert_eq!(sys.alpha.apply(1.5), 2.5);
}

#[test]
fn simulate_prints_the_expected_first_row() {
    let fx = fixture();
    let origin = fx.root.join("origin.json");
    fs::write(&origin, r#"{"atoms": [[0.0, 1.0]]}"#).unwrap();
    let output = run(&[
        "simulate",
        "--system",
        p(&fx.system),
        "--measure",
        p(&origin),
        "--horizon",
        "3",
        "--csv",
    ]);
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next(),
        Some("n,tv_norm,atom_count,min_position,max_position")
    );
    // C_1 applied to a unit mass at the origin: half of 3 at +1 and half
    // of 1/4 at -1.
    assert_eq!(
        lines.next(),
        Some("1,1.6250000000000000e0,2,-1.0000000000000000e0,1.0000000000000000e0")
    );
}

#[test]
fn check_exit_codes_track_the_verdict() {
    let fx = fixture();
    let passing = run(&[
        "check",
        "--system",
        p(&fx.system),
        "--window",
        "-5",
        "5",
        "--horizon",
        "60",
    ]);
    assert_eq!(passing.status.code(), Some(0));
    let stdout = String::from_utf8(passing.stdout).unwrap();
    assert!(stdout.contains("overall: HOLDS"), "{stdout}");

    let failing = run(&[
        "check",
        "--system",
        p(&fx.isometry),
        "--window",
        "-5",
        "5",
        "--horizon",
        "60",
    ]);
    assert_eq!(failing.status.code(), Some(2));
    let stdout = String::from_utf8(failing.stdout).unwrap();
    assert!(stdout.contains("overall: FAILS"), "{stdout}");
}

#[test]
fn witness_exit_codes_track_stabilization() {
    let fx = fixture();
    let common = [
        "--measure",
        p(&fx.mu),
        "--measure",
        p(&fx.nu),
        "--window",
        "-5",
        "5",
        "--horizon",
        "40",
        "--radius",
        "0.25",
        "--case",
        "e-equals-k",
    ];

    let found = run(&[&["witness", "--system", p(&fx.system)], &common[..]].concat());
    assert_eq!(found.status.code(), Some(0));
    let stdout = String::from_utf8(found.stdout).unwrap();
    assert!(stdout.contains("stable_from: 11"), "{stdout}");

    let none = run(&[&["witness", "--system", p(&fx.isometry)], &common[..]].concat());
    assert_eq!(none.status.code(), Some(2));
    let stdout = String::from_utf8(none.stdout).unwrap();
    assert!(
        stdout.contains("no stable witness within horizon 40"),
        "{stdout}"
    );
}

#[test]
fn csv_output_is_deterministic_across_reruns() {
    let fx = fixture();
    let out1 = fx.root.join("scan1.csv");
    let out2 = fx.root.join("scan2.csv");
    for out in [&out1, &out2] {
        let output = run(&[
            "witness",
            "--system",
            p(&fx.system),
            "--measure",
            p(&fx.mu),
            "--measure",
            p(&fx.nu),
            "--window",
            "-5",
            "5",
            "--horizon",
            "25",
            "--csv",
            "--out",
            p(out),
        ]);
        assert_eq!(output.status.code(), Some(0));
    }
    let first = fs::read(&out1).unwrap();
    assert_eq!(first, fs::read(&out2).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("n,lambda,dist_phi,dist_target,success")
    );
    assert_eq!(text.lines().count(), 26);
    assert!(text.lines().last().unwrap().ends_with(",true"));
}

#[test]
fn json_report_parses_and_carries_verdicts() {
    let fx = fixture();
    let output = run(&[
        "check",
        "--system",
        p(&fx.system),
        "--window",
        "-5",
        "5",
        "--horizon",
        "12",
        "--json",
    ]);
    // A horizon this short is not conclusive either way; only the payload
    // format is under test here.
    let value: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("stdout should be JSON");
    assert_eq!(value["horizon"], 12);
    assert_eq!(value["values_a"].as_array().unwrap().len(), 12);
    assert!(value["overall"].is_string());
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let fx = fixture();
    let config = fx.root.join("config.json");
    fs::write(
        &config,
        format!(
            r#"{{"system": "{}", "window": {{"lo": -5.0, "hi": 5.0}}, "horizon": 4}}"#,
            p(&fx.system).replace('\\', "/")
        ),
    )
    .unwrap();

    // The configured horizon of 4 is too short to settle, but the flag
    // override restores the conclusive run.
    let overridden = run(&["check", "--config", p(&config), "--horizon", "60"]);
    assert_eq!(overridden.status.code(), Some(0));
}

#[test]
fn errors_exit_one_with_a_message() {
    let fx = fixture();
    let missing = run(&[
        "check",
        "--system",
        p(&fx.root.join("nope.json")),
        "--window",
        "0",
        "1",
    ]);
    assert_eq!(missing.status.code(), Some(1));
    let stderr = String::from_utf8(missing.stderr).unwrap();
    assert!(stderr.starts_with("error:"), "{stderr}");

    let no_window = run(&["check", "--system", p(&fx.system)]);
    assert_eq!(no_window.status.code(), Some(1));
    let stderr = String::from_utf8(no_window.stderr).unwrap();
    assert!(stderr.contains("window"), "{stderr}");
}

#[test]
fn validation_failures_name_the_offending_field() {
    let fx = fixture();
    let bad = fx.root.join("bad-system.json");
    fs::write(
        &bad,
        r#"{"alpha": {"kind": "affine", "a": 0.0, "b": 1.0},
            "weight": {"breakpoints": [], "left_tail": 1.0, "right_tail": 1.0}}"#,
    )
    .unwrap();
    let output = run(&[
        "simulate",
        "--system",
        p(&bad),
        "--measure",
        p(&fx.mu),
        "--horizon",
        "2",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("validation error"), "{stderr}");
    assert!(stderr.contains("alpha.a"), "{stderr}");

    let garbled = fx.root.join("garbled.json");
    fs::write(&garbled, "{not json").unwrap();
    let output = run(&[
        "simulate",
        "--system",
        p(&garbled),
        "--measure",
        p(&fx.mu),
        "--horizon",
        "2",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("parse error"), "{stderr}");
}

#[test]
fn usage_errors_keep_claps_exit_code() {
    let output = run(&["check", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(2));
}
