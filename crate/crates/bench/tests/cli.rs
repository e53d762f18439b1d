use std::path::PathBuf;
use std::process::{Command, Output};

use caratheodory_bench::report::BenchmarkReport;

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cara-bench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("cara-bench-cli-{}-{name}", std::process::id()))
}

#[test]
fn sweep_writes_one_record_per_method_size_and_trial() {
    let out = bench(&[
        "sweep",
        "--synthetic",
        "3000,4,0,1000",
        "--sizes",
        "1000,3000",
        "--trials",
        "2",
        "--methods",
        "plain,coreset,coreset-pp",
        "--solver",
        "lasso",
        "--alpha-count",
        "5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: BenchmarkReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.records.len(), 12);
    assert_eq!(report.summaries.len(), 6);
    for r in &report.records {
        assert!(r.is_ok(), "{}", r.status);
        assert!(r.max_abs_error.unwrap() <= 1e-8, "{} {:?}", r.method, r.max_abs_error);
        assert_eq!(r.seed, r.trial as u64);
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let cfg = temp("config.json");
    std::fs::write(
        &cfg,
        r#"{"dataset": {"kind": "synthetic", "n": 800, "d": 3, "low": 0, "high": 10},
            "methods": ["plain", "sketch-svd"], "solver": "linear", "trials": 3, "seed": 40}"#,
    )
    .unwrap();
    let out = bench(&["sweep", "--config", cfg.to_str().unwrap(), "--trials", "1", "--format", "csv"]);
    std::fs::remove_file(&cfg).unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("plain,linear,f64,800,3,"));
    assert!(lines[2].starts_with("sketch-svd,linear,f64,800,3,"));
}

#[test]
fn csv_dataset_and_output_file() {
    let data = temp("data.csv");
    let mut text = String::from("x,y,z,t\n");
    for i in 0..200 {
        let (x, y, z) = (i as f64 * 0.5, ((i * 7) % 13) as f64, ((i * 3) % 11) as f64);
        text.push_str(&format!("{x},{y},{z},{}\n", x - 2.0 * y + 0.5 * z + 1.0));
    }
    std::fs::write(&data, text).unwrap();
    let report_path = temp("report.json");
    let out = bench(&[
        "cv-sweep",
        "--dataset",
        data.to_str().unwrap(),
        "--features",
        "0,1,2",
        "--target",
        "3",
        "--header",
        "--alpha-counts",
        "3,6",
        "--trials",
        "1",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: BenchmarkReport = serde_json::from_slice(&std::fs::read(&report_path).unwrap()).unwrap();
    std::fs::remove_file(&data).unwrap();
    std::fs::remove_file(&report_path).unwrap();
    assert_eq!(report.command, "cv-sweep");
    let counts: Vec<usize> = report.records.iter().map(|r| r.alpha_count).collect();
    assert_eq!(counts, vec![3, 3, 3, 6, 6, 6]);
    for r in report.records.iter().filter(|r| r.method != "plain") {
        assert_eq!(r.coreset_builds, 3);
    }
}

#[test]
fn histogram_defaults_to_f32_linear_regression() {
    let out = bench(&["histogram", "--synthetic", "2000,3,0,1000", "--trials", "3", "--bins", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: BenchmarkReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.config.precision.to_string(), "f32");
    assert_eq!(report.histograms.len(), 5);
    for h in &report.histograms {
        assert_eq!(h.counts.len(), 5);
        assert_eq!(h.counts.iter().sum::<usize>() + h.failures, 3);
    }
}

#[test]
fn same_config_reproduces_non_timing_fields() {
    let run = || {
        let out = bench(&["sweep", "--synthetic", "1500,3,0,1000", "--trials", "2", "--solver", "elastic", "--alpha-count", "4"]);
        assert!(out.status.success());
        let mut r: BenchmarkReport = serde_json::from_slice(&out.stdout).unwrap();
        for rec in &mut r.records {
            rec.wall_time_seconds = 0.0;
            rec.solve_seconds = 0.0;
            rec.coreset_build_seconds = rec.coreset_build_seconds.map(|_| 0.0);
        }
        r.summaries.clear();
        r
    };
    assert_eq!(run(), run());
}

#[test]
fn bad_input_fails_with_a_message() {
    let out = bench(&["sweep", "--methods", "nope"]);
    assert!(!out.status.success());
    let out = bench(&["cv-sweep", "--synthetic", "100,2,0,1", "--solver", "linear"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("regularized solver"));
    let out = bench(&["sweep", "--dataset", "/nonexistent/file.csv", "--features", "0", "--target", "1"]);
    assert!(!out.status.success());
}
