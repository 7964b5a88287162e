use std::path::Path;
use std::process::{Command, Output};

fn polylimit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polylimit"))
        .env("POLYLIMIT_OUT_DIR", dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn wang_solve_flat_case_writes_constant_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = polylimit(
        dir.path(),
        &["wang-solve", "--n", "0", "--r", "6", "--m", "512"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = String::from_utf8(read(dir.path(), "wang_n0_r6_m512.csv")).unwrap();
    let exact = 2f64.ln() / 3.0;
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let u: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((u - exact).abs() <= 1e-8);
        rows += 1;
    }
    assert_eq!(rows, 513);
}

#[test]
fn reproducible_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = [
        "--reproducible",
        "tits-tile",
        "4",
        "4",
        "4",
        "--s",
        "0.5",
        "--depth",
        "5",
    ];
    assert!(polylimit(a.path(), &args).status.success());
    assert!(polylimit(b.path(), &args).status.success());
    for name in ["tits_4_4_4_s0.5_d5.json", "tits_4_4_4_s0.5_d5.svg"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    let gb = [
        "gb-check",
        "3",
        "4",
        "5",
        "--depth",
        "6",
        "--patches",
        "20",
        "--seed",
        "3",
    ];
    assert!(polylimit(a.path(), &gb).status.success());
    assert!(polylimit(b.path(), &gb).status.success());
    assert_eq!(
        read(a.path(), "gb_3_4_5_s0_d6.json"),
        read(b.path(), "gb_3_4_5_s0_d6.json")
    );
}

#[test]
fn timestamp_only_without_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        polylimit(dir.path(), &["tits-tile", "4", "4", "4", "--depth", "3"])
            .status
            .success()
    );
    let svg = String::from_utf8(read(dir.path(), "tits_4_4_4_s0_d3.svg")).unwrap();
    assert!(svg.contains("<metadata>"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["no-such-command"],
        vec!["wang-solve", "--n", "1"],
        vec!["wang-solve", "--n", "1", "--r", "0"],
        vec!["develop", "--n", "1", "--r", "4", "--rho", "5"],
        vec!["tits-tile", "2", "3", "7"],
        vec!["tits-tile", "3", "3", "3"],
    ] {
        let out = polylimit(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_one_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = polylimit(
        dir.path(),
        &["develop", "--n", "1", "--r", "4", "--rho", "3", "--k", "2"],
    );
    assert_eq!(out.status.code(), Some(2));
    // e^{2s} = e^60 pushes the first wall test below double resolution
    let out = polylimit(
        dir.path(),
        &["tits-tile", "4", "4", "4", "--s", "30", "--depth", "12"],
    );
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(v["error"].is_string());
}
