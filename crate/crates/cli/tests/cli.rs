mod common;

use std::fs;

use ccrsim::{EXIT_OK, EXIT_PLAN, EXIT_SCRIPT, EXIT_WARNINGS};
use common::{cli, examples_dir};

fn example(name: &str) -> String {
    examples_dir().join(name).to_string_lossy().into_owned()
}

fn script(body: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("script.ccr");
    fs::write(&path, body).unwrap();
    (dir, path.to_string_lossy().into_owned())
}

#[test]
fn report_to_stdout() {
    let r = cli(&["run", &example("independent.ccr"), "--report", "-"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.starts_with("[t=0.000 +0.000] nille: initialPose(2.5, 0, 0)"));
    assert!(r.stdout.ends_with("total: 9.373 s\n"));
    assert!(r.stderr.is_empty());
}

#[test]
fn trace_to_stdout() {
    let r = cli(&["run", &example("robots.ccr"), "--trace", "-"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(
        r.stdout,
        "{\"t\":0,\"robot\":\"frederik\",\"x\":2.5,\"y\":2.25,\"heading\":180,\"v\":0}\n\
         {\"t\":0,\"robot\":\"nille\",\"x\":3.5,\"y\":1.25,\"heading\":270,\"v\":0}\n"
    );
}

#[test]
fn move_before_initial_pose() {
    let (_dir, path) =
        script("sceneWidth = 10;\nsceneDepth = 5;\nrobot nille = robot(\"Nille\", color(255,0,0));\nmove(nille, 1);\n");
    let r = cli(&["run", &path]);
    assert_eq!(r.code, EXIT_SCRIPT);
    assert!(r.stderr.starts_with(&format!("{path}:4:6: error:")), "{}", r.stderr);
}

#[test]
fn syntax_error_position() {
    let (_dir, path) = script("sceneWidth = 10;\nsceneDepth = 5;\nwait(nille 2);\n");
    let r = cli(&["check", &path]);
    assert_eq!(r.code, EXIT_SCRIPT);
    assert!(r.stderr.starts_with(&format!("{path}:3:")), "{}", r.stderr);
}

#[test]
fn physically_impossible_speed_is_a_planning_error() {
    let (_dir, path) = script(
        "sceneWidth = 10;\nsceneDepth = 5;\nrobot nille = robot(\"Nille\", color(255,0,0));\n\
         initialPose(nille, 0, 1, north);\nmaxSpeed(nille, 50);\nmove(nille, 1);\n",
    );
    let r = cli(&["run", &path]);
    assert_eq!(r.code, EXIT_PLAN, "{}", r.stderr);
    assert!(r.stderr.contains(":5:1: error: maxSpeed(50): "), "{}", r.stderr);
}

#[test]
fn strict_turns_warnings_into_status() {
    let path = example("forbidden.ccr");
    let relaxed = cli(&["run", &path]);
    assert_eq!(relaxed.code, EXIT_OK);
    assert_eq!(relaxed.stderr.matches("warning").count(), 1);
    assert!(relaxed.stderr.contains("\"green stuff\""));
    let strict = cli(&["run", &path, "--strict"]);
    assert_eq!(strict.code, EXIT_WARNINGS);
    let clean = cli(&["run", &example("steps.ccr"), "--strict"]);
    assert_eq!(clean.code, EXIT_OK);
}

#[test]
fn check_summary() {
    let path = example("steps.ccr");
    let r = cli(&["check", &path]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout, format!("{path}: ok, 1 robots, 17 instructions, 30.841 s\n"));
}

#[test]
fn missing_file() {
    let r = cli(&["run", "/nonexistent/script.ccr"]);
    assert_eq!(r.code, EXIT_SCRIPT);
    assert!(r.stderr.contains("cannot read"));
}

#[test]
fn bad_arguments() {
    assert_eq!(cli(&["run"]).code, EXIT_SCRIPT);
    assert_eq!(cli(&["run", &example("steps.ccr"), "--dt", "0"]).code, EXIT_SCRIPT);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_SCRIPT);
    let help = cli(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("run"));
}

#[test]
fn config_file_changes_defaults() {
    let (dir, path) = script(
        "sceneWidth = 10;\nsceneDepth = 5;\nrobot nille = robot(\"Nille\", color(255,0,0));\n\
         initialPose(nille, 0, 0, north);\nmove(nille, 4);\n",
    );
    let config = dir.path().join("speeds.toml");
    fs::write(&config, "max_speed = 2.0\nacceleration = 1.0\ndeceleration = 1.0\n").unwrap();
    let r = cli(&["check", &path, "--config", config.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.ends_with(", 4.000 s\n"), "{}", r.stdout);

    fs::write(&config, "max_speed = -1\n").unwrap();
    assert_eq!(
        cli(&["check", &path, "--config", config.to_str().unwrap()]).code,
        EXIT_SCRIPT
    );
    fs::write(&config, "top_speed = 1\n").unwrap();
    assert_eq!(
        cli(&["check", &path, "--config", config.to_str().unwrap()]).code,
        EXIT_SCRIPT
    );
}

#[test]
fn unwritable_output() {
    let r = cli(&["run", &example("steps.ccr"), "--svg", "/nonexistent/dir/out.svg"]);
    assert_eq!(r.code, EXIT_SCRIPT);
    assert!(r.stderr.contains("cannot write"));
}

#[test]
fn binary_exit_status() {
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_ccrsim"))
        .args(["run", &example("forbidden.ccr"), "--strict"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_WARNINGS));
}
