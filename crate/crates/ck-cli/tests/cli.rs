//! End-to-end checks of the `ck` binary: figure/simulate output formats,
//! byte stability across processes, config-file precedence, error paths.

use std::path::Path;
use std::process::Command;

fn ck() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ck"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn figure_csv_is_byte_stable_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let status = ck()
            .args(["figure", "4.4", "--grid", "0:10:101", "--out"])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(read(&a), read(&b));
    let header = read(&a).lines().next().unwrap().to_string();
    assert_eq!(header, "omega_t,q_ak,w_ak,w_cl");
    // LF endings, no CR
    assert!(!read(&a).contains('\r'));
}

#[test]
fn figure_metadata_sidecar_has_asymptotes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    assert!(ck()
        .args(["figure", "4.5", "--grid", "0:10:11", "--out"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let meta: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("fig.csv.meta.json"))).unwrap();
    assert!((meta["asymptotes"]["w_q"].as_f64().unwrap() + 1.05).abs() < 1e-12);
    assert_eq!(meta["config"]["preset"], "UO");
}

#[test]
fn simulate_honors_config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "preset = OO\ngrid = 0:5:6\ntheta = 0.4\n").unwrap();
    let out = dir.path().join("series.csv");
    // flag overrides theta from the file
    assert!(ck()
        .args(["simulate", "--config"])
        .arg(&conf)
        .args(["--theta", "0.2", "--engines", "quantum", "--out"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let text = read(&out);
    assert_eq!(text.lines().count(), 7); // header + 6 rows
    assert!(text.starts_with("omega_t,k_q\n"));
    let meta: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("series.csv.meta.json"))).unwrap();
    assert_eq!(meta["config"]["theta"], "0.2");
    // K_q(0)/K0 = 1 + 0.2*0.5 = 1.1
    let first = text.lines().nth(1).unwrap();
    let k0: f64 = first.split(',').nth(1).unwrap().parse().unwrap();
    assert!((k0 - 1.1).abs() < 1e-14);
}

#[test]
fn drag_series_uses_tau_axis() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("drag.csv");
    assert!(ck()
        .args(["simulate", "--preset", "drag", "--grid", "0:4:5", "--out"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    assert!(read(&out).starts_with("tau,"));
}

#[test]
fn invalid_parameters_exit_nonzero_with_field_message() {
    let output = ck()
        .args(["simulate", "--epsilon", "1.0"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("epsilon"), "stderr: {err}");
}

#[test]
fn mu_engine_requires_mu_flag() {
    let output = ck()
        .args(["simulate", "--engines", "mu_state"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("--mu"));
}

#[test]
fn sweep_command_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let status = ck()
        .args(["sweep", "--count", "10", "--tau-points", "11", "--seed", "3", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(read(&out).lines().count(), 11);
}
