//! End-to-end runs of the binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn icoflux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icoflux")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_params(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const UNIT: &str = "b = 1\nc = 1\nc1 = 1\nc2 = 1\nc3 = 1\nc5 = 1\n";

#[test]
fn icosahedral_branch_has_unit_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_params(dir.path(), "p.toml", &format!("{UNIT}a = -2\nd = 1\nc4 = 1\n"));
    let o = icoflux(&["branches", "--params", p.to_str().unwrap(), "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ico = v.as_array().unwrap().iter().find(|b| b["id"] == "icosahedral").unwrap();
    // xi = sqrt(-a / 2 c1) = 1, energy -a^2 / 4 c1 = -1
    assert_eq!(ico["amplitudes"], serde_json::json!([1.0]));
    assert_eq!(ico["energy"], -1.0);
    assert_eq!(ico["stable"], true);
    assert_eq!(ico["coords"].as_array().unwrap().len(), 12);
}

#[test]
fn four_quadrant_scan() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_params(dir.path(), "base.toml", &format!("{UNIT}c4 = 3\n"));
    let csv = dir.path().join("phases.csv");
    let o = icoflux(&[
        "scan", "--a-range", "-1:1:2", "--d-range", "-1:1:2", "--params", p.to_str().unwrap(), "--out", csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let body = std::fs::read_to_string(&csv).unwrap();
    // a = d sits on the line a/c1 = d/c5, where only the second fivefold point survives
    assert_eq!(
        body,
        "a,d,region_label,n_minima_closed_form\r\n-1,-1,D10,6\r\n-1,1,icosahedral,1\r\n1,-1,none,0\r\n1,1,closed,1\r\n"
    );
}

#[test]
fn ranges_can_come_from_the_params_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_params(dir.path(), "base.toml", &format!("{UNIT}c4 = 3\na_range = \"-1:1:2\"\nd_range = \"1:1:1\"\nseed = 4\n"));
    let o = icoflux(&["scan", "--params", p.to_str().unwrap(), "--verify-restarts", "20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "a,d,region_label,n_minima_closed_form,n_minima_numeric\r\n-1,1,icosahedral,1,1\r\n1,1,closed,1,1\r\n");
}

#[test]
fn minimize_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_params(dir.path(), "p.toml", &format!("{UNIT}a = -1\nd = -0.1\nc4 = 3\n"));
    let args = ["minimize", "--params", p.to_str().unwrap(), "--starts", "40", "--seed", "7", "--json"];
    let one = Command::new(env!("CARGO_BIN_EXE_icoflux")).args(args).env("ICOFLUX_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_icoflux")).args(args).env("ICOFLUX_THREADS", "4").output().unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    let labels: Vec<&str> = v.as_array().unwrap().iter().map(|p| p["isotropy"].as_str().unwrap()).collect();
    assert!(labels.contains(&"D10"), "{labels:?}");
}

#[test]
fn selftest_passes() {
    let o = icoflux(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("0 failed"));
}

#[test]
fn group_dump_lists_sixty_elements() {
    let o = icoflux(&["group", "dump", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 60);
    assert_eq!(rows[0], "1,C(e),1,()");
    let class_sizes = |label: &str| rows.iter().filter(|r| r.split(',').nth(1) == Some(label)).count();
    assert_eq!(class_sizes("C(g2)"), 15);
    assert_eq!(class_sizes("C(g2g5)"), 20);
}

#[test]
fn invariants_of_the_five_block() {
    let o = icoflux(&["invariants", "--irrep", "5", "--degree", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["basis"].as_array().unwrap().len(), 1);
    let o = icoflux(&["invariants", "--irrep", "rho2", "--degree", "3"]);
    assert!(stdout(&o).starts_with("rho2 degree 3: dimension 0"));
}

#[test]
fn irreps_validate_dumps_both_matrices() {
    let o = icoflux(&["irreps", "validate", "--dump-P"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("P =\n[1, -1, sqrt5"));
    assert!(text.contains("P^-1 =\n"));
}

#[test]
fn energy_at_a_point() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_params(dir.path(), "p.toml", &format!("{UNIT}a = -2\nd = 1\nc4 = 1\n"));
    let o = icoflux(&["energy", "--params", p.to_str().unwrap(), "--at", "1,1,1,1,1,1,1,1,1,1,1,1", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["at"]["energy"], -1.0);
    assert_eq!(v["params"]["a"], "-2");
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    assert_eq!(icoflux(&["bogus"]).status.code(), Some(2));
    assert_eq!(icoflux(&["branches", "--nope"]).status.code(), Some(2));
    assert_eq!(icoflux(&["invariants", "--irrep", "7", "--degree", "2"]).status.code(), Some(2));
    assert_eq!(icoflux(&["branches", "--params", "/nonexistent/p.toml"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let missing = write_params(dir.path(), "m.toml", "a = 1\n");
    let o = icoflux(&["branches", "--params", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing parameters"));

    let negative = write_params(dir.path(), "n.toml", &format!("{UNIT}a = 1\nd = 1\nc4 = -3\n"));
    assert_eq!(icoflux(&["branches", "--params", negative.to_str().unwrap()]).status.code(), Some(2));

    let base = write_params(dir.path(), "b.toml", &format!("{UNIT}c4 = 3\n"));
    let o = icoflux(&["scan", "--a-range", "1:0:1", "--d-range", "0:1:1", "--params", base.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let o = icoflux(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("selftest"));
}
