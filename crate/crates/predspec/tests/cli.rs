//! End-to-end runs of the `predspec` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn predspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_predspec")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn eval_pdsr_single_prediction() {
    let o = predspec(&["eval", "--problem", "dsr", "--algorithm", "pdsr", "--b", "100", "--lambda", "0.5", "--y", "120"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&o)[0];
    assert!((r["beta_y"].as_f64().unwrap() - 1.2).abs() < 1e-12);
    assert!((r["gamma_y"].as_f64().unwrap() - 2.2).abs() < 1e-12);
    assert!(r["params"].as_str().unwrap().contains("lambda=0.5"));
}

#[test]
fn eval_pst_single_prediction() {
    let o = predspec(&["eval", "--problem", "oms", "--algorithm", "pst", "--L", "10", "--U", "20", "--lambda", "0.5", "--y", "13"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&o)[0];
    assert!((r["beta_y"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((r["gamma_y"].as_f64().unwrap() - 20.0 / 13.0).abs() < 1e-12);
}

#[test]
fn eval_grid_has_default_size() {
    let o = predspec(&["eval", "--problem", "oms", "--algorithm", "el-yaniv", "--L", "10", "--U", "20"]);
    assert_eq!(json_lines(&o).len(), 200);
    let o = predspec(&["eval", "--problem", "rsr", "--algorithm", "karlin", "--grid", "20"]);
    assert_eq!(json_lines(&o).len(), 20);
}

#[test]
fn usage_errors_exit_2() {
    let missing = predspec(&["eval", "--problem", "dsr", "--algorithm", "pdsr", "--y", "120"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--lambda"));
    let range = predspec(&["eval", "--problem", "dsr", "--algorithm", "kd", "--lambda", "1.5", "--y", "3"]);
    assert_eq!(range.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&range.stderr).contains("lambda"));
    assert_eq!(predspec(&["eval", "--problem", "dsr", "--algorithm", "nope", "--y", "3"]).status.code(), Some(2));
    assert_eq!(predspec(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn data_errors_exit_1() {
    assert_eq!(predspec(&["vix", "--data", "/nonexistent.csv"]).status.code(), Some(1));
    assert_eq!(predspec(&["dpm", "--trace", "/nonexistent.txt"]).status.code(), Some(1));
    let bad = std::env::temp_dir().join("predspec-bad-idle.txt");
    std::fs::write(&bad, "1.0\n-3\n").unwrap();
    assert_eq!(predspec(&["dpm", "--trace", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn csv_and_json_carry_the_same_values() {
    let args = ["eval", "--problem", "rsr", "--algorithm", "prsr", "--gamma-bar", "3", "--grid", "15"];
    let json = json_lines(&predspec(&args));
    let mut csv_args = args.to_vec();
    csv_args.extend(["--output", "csv"]);
    let csv_out = stdout(&predspec(&csv_args));
    let mut rdr = csv::Reader::from_reader(csv_out.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), json.len());
    for (row, j) in rows.iter().zip(&json) {
        assert_eq!(row[1], *j["algorithm"].as_str().unwrap());
        for (i, key) in [(2, "y"), (3, "beta_y"), (4, "gamma_y")] {
            assert_eq!(row[i].parse::<f64>().unwrap(), j[key].as_f64().unwrap());
        }
        assert_eq!(row[5], *j["params"].as_str().unwrap());
    }
}

#[test]
fn frontier_flags_the_algorithm_point() {
    let o = predspec(&["frontier", "--problem", "dsr", "--algorithm", "pdsr", "--lambda", "0.5", "--y", "120"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["algorithm"]["on_front"], true);
    assert_eq!(v["points"].as_array().unwrap().len(), 221);
    let o = predspec(&["frontier", "--problem", "oms", "--algorithm", "sun", "--lambda", "0.5", "--L", "10", "--U", "20", "--y", "10.5"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["algorithm"]["on_front"], false);
}

#[test]
fn experiments_are_byte_reproducible() {
    let runs: Vec<[&str; 7]> = vec![
        ["ski-synthetic", "--p", "1.0", "--seed", "7", "--trials", "2000"],
        ["vix", "--data", "", "--error-level", "0", "--lambda", "0.5"],
    ];
    for mut args in runs {
        let path = data("vix_sample.csv");
        if args[0] == "vix" {
            args[2] = &path;
        }
        let a = predspec(&args);
        assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, predspec(&args).stdout);
    }
}

#[test]
fn ski_synthetic_pdsr_beats_kd_with_accurate_predictions() {
    let o = predspec(&["ski-synthetic", "--p", "1.0", "--seed", "7", "--trials", "10000"]);
    let recs = json_lines(&o);
    let mean = |name: &str| {
        recs.iter()
            .find(|r| r["algorithm"].as_str().unwrap().starts_with(name))
            .unwrap()["y"]
            .as_f64()
            .unwrap()
    };
    assert!(mean("pdsr") <= mean("kd"));
    assert!(!String::from_utf8_lossy(&o.stderr).trim().is_empty());
}

#[test]
fn vix_emits_one_ratio_per_round_and_algorithm() {
    let path = data("vix_sample.csv");
    let o = predspec(&["vix", "--data", &path, "--error-level", "0", "--lambda", "0.5", "--eps", "0.5"]);
    let recs = json_lines(&o);
    assert_eq!(recs.len(), 5 * 6);
    assert!(recs.iter().all(|r| r["params"].as_str().unwrap().contains("month=2023-")));
}

#[test]
fn dpm_reports_each_policy() {
    let o = predspec(&["dpm", "--trace", &data("idle_sample.txt"), "--states", &data("states4.json"), "--gamma-bar", "3", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let recs = json_lines(&o);
    assert_eq!(recs.len(), 6);
    assert!(recs.iter().all(|r| r["y"].as_f64().unwrap() >= 1.0 - 1e-12));
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join("predspec-out-test.jsonl");
    let o = predspec(&["eval", "--problem", "sched2", "--algorithm", "two-stage", "--lambda", "0.2", "--y", "1", "--y2", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"beta_y\":1.2"));
}
