use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lrc-bounds"));
    cmd.env_remove("LRC_DATA_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn bound_json(args: &[&str]) -> Value {
    let mut full = vec!["bound"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(stdout(&out).trim()).expect("one JSON record")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn bound_examples() {
    let lp = bound_json(&[
        "--q", "2", "--n", "8", "--d", "3", "--r", "3", "--rho", "2", "--method", "lp",
    ]);
    assert_eq!(lp["value"], 4);
    assert_eq!(lp["method"], "lp");
    assert_eq!(lp["exact"], true);
    for key in ["method", "params", "kind", "value", "exact", "witness"] {
        assert!(lp.get(key).is_some(), "missing {key}");
    }
    for key in ["q", "n", "d", "r", "rho"] {
        assert!(lp["params"].get(key).is_some(), "missing params.{key}");
    }

    let sh = bound_json(&[
        "--q", "2", "--n", "6", "--d", "3", "--r", "2", "--rho", "2", "--method", "sh",
    ]);
    assert_eq!(sh["value"], 3);

    let rec = bound_json(&[
        "--method",
        "rec-singleton",
        "--q",
        "2",
        "--n",
        "12",
        "--d",
        "3",
        "--r",
        "3",
        "--rho",
        "2",
    ]);
    assert_eq!(rec["value"], 12);
    assert_eq!(rec["witness"]["mu"], 4);
}

#[test]
fn bound_error_exit_codes() {
    // n = 7 is not a multiple of the group width 4.
    let out = run(&[
        "bound", "--n", "7", "--d", "3", "--r", "3", "--method", "lp",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());

    let out = run(&[
        "bound", "--n", "8", "--d", "9", "--r", "3", "--method", "sh",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Plotkin needs 2d > n for the base length.
    let out = run(&[
        "bound",
        "--n",
        "30",
        "--d",
        "3",
        "--r",
        "5",
        "--rho",
        "2",
        "--method",
        "rec-plotkin",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&[
        "bound", "--n", "8", "--d", "3", "--r", "3", "--method", "nope",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_one() {
    let out = run(&["table", "--id", "I"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0], ["r", "SH", "LP", "flag"]);
    let sh: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    let lp: Vec<&str> = rows[1..].iter().map(|r| r[2].as_str()).collect();
    assert_eq!(sh, ["3", "4", "6", "8", "10", "11", "13", "15", "17"]);
    assert_eq!(lp, ["2", "4", "5", "7", "9", "11", "12", "14", "16"]);
}

#[test]
fn table_three_first_row() {
    let out = run(&["table", "--id", "III"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[1][..3], ["2", "1", "1"]);
}

#[test]
fn asym_examples() {
    let out = run(&[
        "asym",
        "--bound",
        "upper-cm",
        "--r",
        "2",
        "--delta-grid",
        "0.38:0.38:1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0], ["delta", "value", "method", "minimizer", "note"]);
    assert_eq!(rows.len(), 2);
    let v: f64 = rows[1][1].parse().unwrap();
    assert!((v - 0.1099).abs() < 1e-3);

    let out = run(&[
        "asym",
        "--bound",
        "gv",
        "--r",
        "2",
        "--delta-grid",
        "0.000001:0.000001:1",
    ]);
    let v: f64 = csv_rows(&stdout(&out))[1][1].parse().unwrap();
    assert!((v - 2.0 / 3.0).abs() < 1e-4);

    let out = run(&[
        "asym",
        "--bound",
        "upper-disjoint",
        "--r",
        "2",
        "--interp",
        "as-printed",
        "--delta-grid",
        "0.38:0.38:1",
    ]);
    let row = &csv_rows(&stdout(&out))[1];
    assert!(row[1].parse::<f64>().unwrap() > 1.0);
    assert_eq!(row[4], "non-physical");

    let out = run(&[
        "asym",
        "--bound",
        "upper-cm",
        "--delta-grid",
        "0.4:0.1:0.01",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "asym",
        "--bound",
        "upper-cm",
        "--delta-grid",
        "0.1:0.6:0.01",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn asym_grid_length() {
    let out = run(&["asym", "--bound", "mrrw2", "--delta-grid", "0.1:0.2:0.01"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 12);
    let first: f64 = rows[1][0].parse().unwrap();
    let last: f64 = rows[11][0].parse().unwrap();
    assert!((first - 0.1).abs() < 1e-12 && (last - 0.2).abs() < 1e-12);
}

#[test]
fn figure1_signs() {
    let out = run(&["figure1", "--r", "2", "--delta-grid", "0.30:0.40:0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(
        rows[0],
        ["r", "delta", "upper_cm", "upper_disjoint", "difference"]
    );
    assert_eq!(rows.len(), 3);
    let diff = |row: &Vec<String>| row[4].parse::<f64>().unwrap();
    assert!(diff(&rows[1]) < 0.0, "delta 0.30: {:?}", rows[1]);
    assert!(diff(&rows[2]) > 0.0, "delta 0.40: {:?}", rows[2]);
    for row in &rows[1..] {
        let cm: f64 = row[2].parse().unwrap();
        let dis: f64 = row[3].parse().unwrap();
        assert!((cm - dis - diff(row)).abs() < 1e-9);
    }
}

#[test]
fn verify_suites_pass() {
    for suite in [
        "orthogonality",
        "logconvex",
        "cosets",
        "certificate",
        "delsarte",
    ] {
        let out = run(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
    }
}

#[test]
fn deterministic_output() {
    let args = ["table", "--id", "II"];
    let a = run(&args);
    let b = bin()
        .args(args)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let args = [
        "bound", "--n", "12", "--d", "5", "--r", "3", "--method", "lp",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lrc-bounds-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn corrupted_data_file_fails_at_startup() {
    let dir = scratch_dir("corrupt");
    std::fs::write(dir.join("m2_upper.csv"), "n,d,bound,source\n7,4,eight,x\n").unwrap();
    let out = bin()
        .env("LRC_DATA_DIR", &dir)
        .args(["verify", "--suite", "orthogonality"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let missing = bin()
        .env("LRC_DATA_DIR", dir.join("absent"))
        .args(["table", "--id", "I"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn data_dir_override_is_used() {
    let dir = scratch_dir("override");
    std::fs::write(
        dir.join("m2_upper.csv"),
        lrc_bounds::classical::BUNDLED_M2_TABLE,
    )
    .unwrap();
    let out = bin()
        .env("LRC_DATA_DIR", &dir)
        .args(["table", "--id", "I"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, run(&["table", "--id", "I"]).stdout);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn help_goes_to_stdout() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("figure1"));
}
