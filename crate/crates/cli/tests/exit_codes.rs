use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn qbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbm")).args(args).output().unwrap()
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn no_advantage_is_success() {
    let out = qbm(&["probe", &path("identity.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"no_quantum_advantage\""));
}

#[test]
fn validation_errors_exit_with_one() {
    let out = qbm(&["entropy", &path("rho_bad_trace.json"), &path("rho_mixed.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace"));

    let out = qbm(&["train", &path("rbm_zero.json"), "--data", &path("samples_bad.txt")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("samples_bad.txt:2"));

    let out = qbm(&["anneal", &path("single_spin.json"), "--schedule", "1:10,0.5:10"]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(qbm(&["probe", "/nonexistent/observable.json"]).status.code(), Some(1));
    assert_eq!(qbm(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn out_flag_writes_report_and_sample_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let samples = dir.path().join("samples.txt");
    let run = || {
        let out = qbm(&[
            "anneal",
            &path("single_spin.json"),
            "--schedule",
            "0.1:5,1:20",
            "--samples",
            "50",
            "--samples-out",
            &samples.to_string_lossy(),
            "--seed",
            "7",
            "--out",
            &report.to_string_lossy(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        (std::fs::read(&report).unwrap(), std::fs::read(&samples).unwrap())
    };
    let first = run();
    assert_eq!(first, run());
    assert_eq!(first.1.iter().filter(|&&b| b == b'\n').count(), 50);
}
