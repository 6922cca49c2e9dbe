#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use ccrscript::scheduler::{TimedAction, Timeline};

/// Sampling step used for the checked-in golden files.
pub const GOLDEN_DT: &str = "0.1";

pub fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// All `.ccr` examples, sorted by file name.
pub fn examples() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = fs::read_dir(examples_dir())
        .expect("examples directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "ccr"))
        .collect();
    paths.sort();
    paths
}

pub fn stem(path: &Path) -> String {
    path.file_stem().unwrap().to_string_lossy().into_owned()
}

pub struct Cli {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn cli(args: &[&str]) -> Cli {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["ccrsim"];
    argv.extend_from_slice(args);
    let code = ccrsim::run(argv, &mut out, &mut err);
    Cli {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

pub struct Outputs {
    pub trace: Vec<u8>,
    pub svg: Vec<u8>,
    pub report: Vec<u8>,
}

/// Runs `example` through the command line, writing all three outputs to files.
pub fn render_files(example: &Path, dt: &str) -> Outputs {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.jsonl");
    let svg = dir.path().join("scene.svg");
    let report = dir.path().join("report.txt");
    let result = cli(&[
        "run",
        example.to_str().unwrap(),
        "--dt",
        dt,
        "--trace",
        trace.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(result.code, 0, "{}: {}", example.display(), result.stderr);
    Outputs {
        trace: fs::read(trace).unwrap(),
        svg: fs::read(svg).unwrap(),
        report: fs::read(report).unwrap(),
    }
}

/// Per-robot actions with source positions erased, for comparing reorderings of one script.
pub fn actions_without_source(timeline: &Timeline) -> Vec<Vec<TimedAction>> {
    timeline
        .tracks()
        .iter()
        .map(|t| {
            t.actions()
                .iter()
                .cloned()
                .map(|mut a| {
                    a.instruction = 0;
                    a
                })
                .collect()
        })
        .collect()
}
