//! Shared by the CLI tests and the acceptance suite.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const BIN: &str = env!("CARGO_BIN_EXE_crw");

pub const GOLDEN: &[(&str, &[&str])] = &[
    ("dist_binomial", &["dist", "--a", "0.5", "--d", "0.5", "--alpha", "0.5", "--n", "4"]),
    ("dist_correlated", &["dist", "--a", "0.7", "--d", "0.4", "--alpha", "0.3", "--n", "6"]),
    ("dist_oracle", &["dist", "--a", "0.7", "--d", "0.4", "--alpha", "0.3", "--n", "5", "--oracle"]),
    ("cf", &["cf", "--a", "0.5", "--d", "0.5", "--alpha", "0.5", "--n", "8", "--points", "9"]),
    ("moment", &["moment", "--a", "0.6", "--d", "0.6", "--alpha", "0.5", "--n", "7", "--m", "2"]),
    ("symmetry", &["symmetry", "--a", "0.7", "--d", "0.7", "--alpha", "0.6"]),
    ("absorb_all", &["absorb", "--a", "0.7", "--d", "0.7", "--alpha", "1", "--N", "4", "--all"]),
    ("absorb_inf", &["absorb", "--a", "0.4", "--d", "0.7", "--alpha", "0.5", "--N", "inf", "--k", "3"]),
    ("limit", &["limit", "--theta", "0.3", "--x-points", "5", "--variance", "--a", "0.6"]),
    (
        "simulate",
        &["simulate", "--a", "0.7", "--d", "0.4", "--alpha", "0.3", "--steps", "10", "--samples", "20000", "--seed", "1", "--against-exact"],
    ),
    (
        "simulate_absorb",
        &["simulate", "--a", "0.7", "--d", "0.7", "--alpha", "1", "--steps", "5000", "--samples", "20000", "--seed", "2", "--N", "4", "--k", "2", "--against-exact"],
    ),
];

pub fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn run_to_file(args: &[&str], format: &str, path: &Path) -> Output {
    let mut full: Vec<&str> = args.to_vec();
    let path_str = path.to_str().unwrap();
    full.extend(["--format", format, "--out", path_str]);
    run(&full)
}

/// Rewrites or compares every golden file; returns the mismatching paths.
pub fn check_goldens(bless: bool) -> Result<Vec<String>, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut mismatches = Vec::new();
    for (name, args) in GOLDEN {
        for ext in ["csv", "json"] {
            let out = tmp.path().join(format!("{name}.{ext}"));
            let status = run_to_file(args, ext, &out);
            if !status.status.success() {
                return Err(format!("{name}: {}", String::from_utf8_lossy(&status.stderr)));
            }
            let produced = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
            let golden = golden_dir().join(format!("{name}.{ext}"));
            if bless {
                std::fs::create_dir_all(golden_dir()).map_err(|e| e.to_string())?;
                std::fs::write(&golden, &produced).map_err(|e| e.to_string())?;
            } else if std::fs::read_to_string(&golden).ok().as_deref() != Some(produced.as_str()) {
                mismatches.push(golden.display().to_string());
            }
        }
    }
    Ok(mismatches)
}

const WALK: [&str; 6] = ["--a", "0.7", "--d", "0.4", "--alpha", "0.3"];

fn with(cmd: &'static str, extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&WALK);
    v.extend_from_slice(extra);
    v
}

/// Invocations that must fail, with their exit codes.
pub fn failing_cases() -> Vec<(Vec<&'static str>, i32)> {
    vec![
        // Malformed or out-of-range flags.
        (vec!["dist", "--a", "1.2", "--d", "0.4", "--alpha", "0.3", "--n", "3"], 2),
        (vec!["dist", "--a", "0.7", "--d", "0.4", "--alpha", "-0.1", "--n", "3"], 2),
        (vec!["dist", "--a", "abc", "--d", "0.4", "--alpha", "0.3", "--n", "3"], 2),
        (with("dist", &["--n", "0"]), 2),
        (with("dist", &[]), 2),
        (with("dist", &["--n", "3", "--bogus"]), 2),
        (with("cf", &["--n", "3", "--points", "1"]), 2),
        (with("moment", &["--n", "3", "--m", "0"]), 2),
        (with("absorb", &["--N", "1", "--k", "0"]), 2),
        (with("absorb", &["--N", "5", "--k", "6"]), 2),
        (with("absorb", &["--N", "inf", "--all"]), 2),
        (with("absorb", &["--N", "5"]), 2),
        (vec!["limit", "--theta", "1.5"], 2),
        (vec!["limit", "--variance", "--a", "0.6", "--d", "0.5"], 2),
        (vec!["limit", "--x-points", "5"], 2),
        (with("simulate", &["--steps", "10", "--samples", "100"]), 2),
        (with("simulate", &["--steps", "10", "--samples", "0", "--seed", "1"]), 2),
        (vec!["frobnicate"], 2),
        // Budgets.
        (with("dist", &["--n", "30", "--oracle"]), 3),
        (with("simulate", &["--steps", "1000000", "--samples", "1000000", "--seed", "1"]), 3),
        // Non-convergence.
        (vec!["absorb", "--a", "0.7", "--d", "0.7000001", "--alpha", "0.5", "--N", "inf", "--k", "5", "--tol", "1e-14"], 4),
    ]
}

/// Runs a failing invocation with `--out` and checks the exit code, the
/// one-line diagnostic and that nothing was written.
pub fn check_failure(args: &[&str], code: i32) -> Result<(), String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out_path = tmp.path().join("never.csv");
    let mut full = args.to_vec();
    full.extend(["--out", out_path.to_str().unwrap()]);
    let out = run(&full);
    let stderr = String::from_utf8_lossy(&out.stderr);
    if out.status.code() != Some(code) {
        return Err(format!("{args:?}: exit {:?}, expected {code}", out.status.code()));
    }
    if stderr.lines().count() != 1 {
        return Err(format!("{args:?}: diagnostic is not one line: {stderr:?}"));
    }
    if out_path.exists() {
        return Err(format!("{args:?}: output written on failure"));
    }
    Ok(())
}

/// Runs `args` twice to files and compares the bytes.
pub fn check_determinism(args: &[&str]) -> Result<(), String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = tmp.path().join("first.json");
    let second = tmp.path().join("second.json");
    for p in [&first, &second] {
        if !run_to_file(args, "json", p).status.success() {
            return Err(format!("{args:?} failed"));
        }
    }
    let (x, y) = (std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    if x == y {
        Ok(())
    } else {
        Err(format!("{args:?}: outputs differ"))
    }
}

pub const DETERMINISM_ARGS: &[&str] = &[
    "simulate", "--a", "0.6", "--d", "0.3", "--alpha", "0.2", "--steps", "50", "--samples", "30000", "--seed", "42",
];
