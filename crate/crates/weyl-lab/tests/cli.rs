//! End-to-end checks of the `weyl` binary: record schema, exit codes, and
//! config-file precedence.

use std::process::Command;

use weyl_lab::record::ResultRecord;

fn weyl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weyl"))
}

#[test]
fn eval_emits_valid_record() {
    let out = weyl()
        .args(["eval", "--d", "3", "--x", "0.1,0.2,0.3", "--n", "1000"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rec = ResultRecord::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(rec.schema, 1);
    assert_eq!(rec.subcommand, "eval");
    assert!(rec.outputs["value"]["magnitude"].as_f64().unwrap() >= 0.0);
}

#[test]
fn repcount_taxicab() {
    let out = weyl()
        .args(["repcount", "--d", "3", "--k", "0", "--n", "12"])
        .output()
        .unwrap();
    let rec = ResultRecord::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(rec.outputs["total"], 284);
}

#[test]
fn dims_piecewise_example() {
    let out = weyl()
        .args(["dims", "--d", "2", "--alpha", "0.6"])
        .output()
        .unwrap();
    let rec = ResultRecord::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!((rec.outputs["s"].as_f64().unwrap() - 1.7).abs() < 1e-12);
    assert!((rec.outputs["u"].as_f64().unwrap() - 1.75).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    // Unknown subcommand: usage, exit 1.
    let out = weyl().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // Validation error: exit 2.
    let out = weyl().args(["eval", "--x", "0.9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = weyl()
        .args(["eval", "--x", "1.7", "--n", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Budget error: exit 3.
    let out = weyl()
        .args(["repcount", "--d", "3", "--n", "4000000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn budget_env_override() {
    let out = weyl()
        .args(["repcount", "--d", "3", "--n", "200"])
        .env("WEYL_LAB_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("weyl-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "d = 3\nk = 0\nn = 12\n").unwrap();
    // All parameters from the file.
    let out = weyl()
        .args(["repcount", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    let rec = ResultRecord::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(rec.outputs["total"], 284);
    // Flag overrides the file value.
    let out = weyl()
        .args(["repcount", "--config", cfg.to_str().unwrap(), "--n", "2"])
        .output()
        .unwrap();
    let rec = ResultRecord::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(rec.outputs["total"], 6); // 2N^2 - N at N = 2
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn csv_output() {
    let dir = std::env::temp_dir().join(format!("weyl-csv-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("pairs.csv");
    let out = weyl()
        .args([
            "powerpairs",
            "--d",
            "3",
            "--k",
            "7",
            "--n",
            "10",
            "--csv",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n1,n2"));
    // 2^3 = 1^3 + 7.
    let rows: Vec<&str> = lines.filter(|l| !l.is_empty()).collect();
    assert_eq!(rows, ["2,1"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_config_reproduces_bit_identically() {
    let run = || {
        weyl()
            .args(["eval", "--x", "0.1,0.2", "--n", "500", "--weights", "random", "--seed", "9"])
            .output()
            .unwrap()
    };
    let a = ResultRecord::parse(std::str::from_utf8(&run().stdout).unwrap()).unwrap();
    let b = ResultRecord::parse(std::str::from_utf8(&run().stdout).unwrap()).unwrap();
    assert_eq!(a.outputs, b.outputs);
}
