use std::io::Write;
use std::path::Path;

use caratheodory::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::config::BenchConfig;

/// One method run on one dataset draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub method: String,
    pub solver: String,
    pub precision: String,
    pub n: usize,
    pub d: usize,
    pub alpha_count: usize,
    pub m: usize,
    pub trial: usize,
    /// Reproduces the dataset draw of this record.
    pub seed: u64,
    /// Coreset build plus solve.
    pub wall_time_seconds: f64,
    pub coreset_build_seconds: Option<f64>,
    pub solve_seconds: f64,
    /// Against the `f64` solution of the plain solver on the same data.
    pub max_abs_error: Option<f64>,
    pub l2_error: Option<f64>,
    pub cholesky_failures: usize,
    pub coreset_builds: usize,
    pub best_alpha: Option<f64>,
    /// `"ok"` or the error the method hit.
    pub status: String,
}

impl TrialRecord {
    pub const CSV_HEADER: [&'static str; 18] = [
        "method",
        "solver",
        "precision",
        "n",
        "d",
        "alpha_count",
        "m",
        "trial",
        "seed",
        "wall_time_seconds",
        "coreset_build_seconds",
        "solve_seconds",
        "max_abs_error",
        "l2_error",
        "cholesky_failures",
        "coreset_builds",
        "best_alpha",
        "status",
    ];

    fn csv_row(&self) -> [String; 18] {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        [
            self.method.clone(),
            self.solver.clone(),
            self.precision.clone(),
            self.n.to_string(),
            self.d.to_string(),
            self.alpha_count.to_string(),
            self.m.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            format!("{:e}", self.wall_time_seconds),
            opt(self.coreset_build_seconds),
            format!("{:e}", self.solve_seconds),
            opt(self.max_abs_error),
            opt(self.l2_error),
            self.cholesky_failures.to_string(),
            self.coreset_builds.to_string(),
            opt(self.best_alpha),
            self.status.clone(),
        ]
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Medians over the trials of one `(method, n, |𝔸|)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub method: String,
    pub n: usize,
    pub alpha_count: usize,
    pub trials: usize,
    pub failures: usize,
    pub median_wall_time_seconds: Option<f64>,
    pub median_max_abs_error: Option<f64>,
}

/// Per-method counts of trial errors over log-spaced bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub method: String,
    /// `bins + 1` ascending edges; values outside fall into the end bins.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub median_error: Option<f64>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub command: String,
    pub config: BenchConfig,
    pub environment: String,
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<Summary>,
    pub histograms: Vec<Histogram>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl BenchmarkReport {
    pub fn new(command: &str, config: BenchConfig) -> Self {
        Self {
            command: command.to_string(),
            config,
            environment: environment_note(),
            records: Vec::new(),
            summaries: Vec::new(),
            histograms: Vec::new(),
        }
    }

    pub fn write<W: Write>(&self, mut w: W, format: Format) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, self).map_err(|e| Error::Io(e.to_string()))?;
                writeln!(w)?;
            }
            Format::Csv => {
                let mut csv = csv::Writer::from_writer(w);
                let io = |e: csv::Error| Error::Io(e.to_string());
                csv.write_record(TrialRecord::CSV_HEADER).map_err(io)?;
                for r in &self.records {
                    csv.write_record(r.csv_row()).map_err(io)?;
                }
                csv.flush()?;
            }
        }
        Ok(())
    }

    pub fn emit(&self, path: &Path, format: Format) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write(std::io::BufWriter::new(file), format)
    }

    /// Fills `summaries` from `records`.
    pub fn summarize(&mut self) {
        let mut keys: Vec<(String, usize, usize)> = Vec::new();
        for r in &self.records {
            let key = (r.method.clone(), r.n, r.alpha_count);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        self.summaries = keys
            .into_iter()
            .map(|(method, n, alpha_count)| {
                let cell: Vec<&TrialRecord> = self
                    .records
                    .iter()
                    .filter(|r| r.method == method && r.n == n && r.alpha_count == alpha_count)
                    .collect();
                let ok: Vec<&&TrialRecord> = cell.iter().filter(|r| r.is_ok()).collect();
                Summary {
                    trials: cell.len(),
                    failures: cell.len() - ok.len(),
                    median_wall_time_seconds: median(ok.iter().map(|r| r.wall_time_seconds).collect()),
                    median_max_abs_error: median(ok.iter().filter_map(|r| r.max_abs_error).collect()),
                    method,
                    n,
                    alpha_count,
                }
            })
            .collect();
    }
}

pub fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

fn environment_note() -> String {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!(
        "{}-{}, {threads} hardware threads, single-threaded timing",
        std::env::consts::ARCH,
        std::env::consts::OS
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(method: &str, wall: f64) -> TrialRecord {
        TrialRecord {
            method: method.into(),
            solver: "ridge".into(),
            precision: "f64".into(),
            n: 10,
            d: 2,
            alpha_count: 1,
            m: 3,
            trial: 0,
            seed: 4,
            wall_time_seconds: wall,
            coreset_build_seconds: None,
            solve_seconds: wall,
            max_abs_error: Some(1e-12),
            l2_error: Some(2e-12),
            cholesky_failures: 0,
            coreset_builds: 0,
            best_alpha: Some(0.5),
            status: "ok".into(),
        }
    }

    #[test]
    fn empty_csv_has_only_the_header() {
        let report = BenchmarkReport::new("sweep", BenchConfig::default());
        let mut buf = Vec::new();
        report.write(&mut buf, Format::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("method,solver,precision"));
    }

    #[test]
    fn csv_has_one_row_per_record() {
        let mut report = BenchmarkReport::new("sweep", BenchConfig::default());
        report.records = vec![record("plain", 1.0), record("coreset", 0.1)];
        let mut buf = Vec::new();
        report.write(&mut buf, Format::Csv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
    }

    #[test]
    fn json_round_trip() {
        let mut report = BenchmarkReport::new("sweep", BenchConfig::default());
        report.records = vec![record("plain", 1.0), record("plain", 3.0), record("plain", 2.0)];
        report.summarize();
        assert_eq!(report.summaries[0].median_wall_time_seconds, Some(2.0));
        let mut buf = Vec::new();
        report.write(&mut buf, Format::Json).unwrap();
        let back: BenchmarkReport = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![]), None);
        assert_eq!(median(vec![3.0, 1.0]), Some(2.0));
        assert_eq!(median(vec![3.0, 1.0, 2.0]), Some(2.0));
    }
}
