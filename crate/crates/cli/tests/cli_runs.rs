//! End-to-end CLI checks: artifact production, determinism, round-trips
//! and error reporting.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fronttrack"))
}

fn workspace_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

#[test]
fn run_produces_artifacts_and_flat_upsilon() {
    let dir = std::env::temp_dir().join("ftcli_run_shock");
    let _ = std::fs::remove_dir_all(&dir);
    let out = bin()
        .args(["run"])
        .arg(workspace_config("burgers_shock.toml"))
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["frontlog.txt", "ledger.txt", "xt_fronts.txt", "snapshot_t1.txt"] {
        assert!(dir.join(f).exists(), "missing {f}");
    }
    // Single shock: ledger has the t = 0 row only and Υ is constant.
    let ledger = std::fs::read_to_string(dir.join("ledger.txt")).unwrap();
    assert_eq!(ledger.lines().count(), 2, "{ledger}");
}

#[test]
fn reruns_bit_identical() {
    let d1 = std::env::temp_dir().join("ftcli_det_1");
    let d2 = std::env::temp_dir().join("ftcli_det_2");
    for d in [&d1, &d2] {
        let _ = std::fs::remove_dir_all(d);
        let out = bin()
            .args(["run"])
            .arg(workspace_config("burgers_shock.toml"))
            .arg("--out")
            .arg(d)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    for f in ["frontlog.txt", "ledger.txt", "xt_fronts.txt", "snapshot_t0.5.txt"] {
        let a = std::fs::read(d1.join(f)).unwrap();
        let b = std::fs::read(d2.join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between reruns");
    }
}

#[test]
fn frontlog_roundtrips_through_parser() {
    let dir = std::env::temp_dir().join("ftcli_roundtrip");
    let _ = std::fs::remove_dir_all(&dir);
    let out = bin()
        .args(["run"])
        .arg(workspace_config("burgers_shock.toml"))
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.join("frontlog.txt")).unwrap();
    let log = fronttrack::tracker::FrontLog::from_text(&text).unwrap();
    assert_eq!(log.to_text(), text);
}

#[test]
fn missing_model_key_reports_field() {
    let dir = std::env::temp_dir().join("ftcli_badcfg");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "eps = 0.1\nt_end = 1.0\n").unwrap();
    let out = bin()
        .args(["run"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("model"), "{err}");
}

#[test]
fn converge_reports_l1_decay() {
    let dir = std::env::temp_dir().join("ftcli_converge");
    let _ = std::fs::remove_dir_all(&dir);
    let out = bin()
        .args(["converge"])
        .arg(workspace_config("burgers_converge.toml"))
        .arg("--out")
        .arg(&dir)
        .args(["--workers", "2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.join("convergence_report.txt")).unwrap();
    // Exact solution is the same shock for every eps: distances tiny.
    let l1: f64 = report
        .lines()
        .find(|l| l.trim_start().starts_with("l1"))
        .and_then(|l| l.split(':').nth(1))
        .and_then(|v| v.trim().parse().ok())
        .unwrap();
    assert!(l1 <= 0.1, "{report}");
    assert!(dir.join("frontlog_eps0.1.txt").exists());
    assert!(dir.join("frontlog_eps0.01.txt").exists());
}
