use std::time::Instant;

use caratheodory::baseline::{sketch_cholesky, sketch_inverse, sketch_svd, solve_from_sketch};
use caratheodory::datasets::load;
use caratheodory::lms::{build_folded, cv_on_coreset, plain_cv, solve_linreg, RegularizationGrid, SolverKind};
use caratheodory::{DenseMatrix, Error, Precision, Real, Result};

use crate::config::{BenchConfig, Method};
use crate::report::{median, BenchmarkReport, Histogram, TrialRecord};

/// Result of one method on one problem, before comparison with the
/// reference.
struct Outcome {
    x: Vec<f64>,
    build_seconds: Option<f64>,
    solve_seconds: f64,
    coreset_builds: usize,
    best_alpha: Option<f64>,
}

fn to_f64<T: Real>(x: &[T]) -> Vec<f64> {
    x.iter().map(|v| v.as_f64()).collect()
}

fn timed<R>(f: impl FnOnce() -> R) -> (R, f64) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed().as_secs_f64())
}

fn run_method<T: Real>(
    cfg: &BenchConfig,
    method: Method,
    solver: SolverKind,
    grid: &RegularizationGrid,
    a: &DenseMatrix<T>,
    b: &[T],
) -> Result<Outcome> {
    let d = a.cols();
    let plain = |x: Vec<T>, secs: f64, best_alpha: Option<f64>| Outcome {
        x: to_f64(&x),
        build_seconds: None,
        solve_seconds: secs,
        coreset_builds: 0,
        best_alpha,
    };
    let sketched = |build: Result<DenseMatrix<T>>, build_secs: f64| -> Result<Outcome> {
        let s = build?;
        let (x, secs) = timed(|| solve_from_sketch(&s));
        Ok(Outcome {
            x: to_f64(&x?),
            build_seconds: Some(build_secs),
            solve_seconds: secs,
            coreset_builds: 0,
            best_alpha: None,
        })
    };

    if method.is_baseline() && solver != SolverKind::Linear {
        return Err(Error::InvalidParameter(format!(
            "{method} only applies to linear regression"
        )));
    }
    match (method, solver) {
        (Method::Plain, SolverKind::Linear) => {
            let (x, secs) = timed(|| solve_linreg(a, b));
            Ok(plain(x?, secs, None))
        }
        (Method::Plain, _) => {
            let (out, secs) = timed(|| plain_cv(a, b, grid, solver));
            let out = out?;
            Ok(plain(out.x, secs, Some(out.best_alpha)))
        }
        (Method::Coreset | Method::CoresetPp, _) => {
            let params = cfg.coreset_params(method, d);
            let (folded, build_secs) = timed(|| build_folded(a, b, cfg.m, params));
            let folded = folded?;
            let (x, best_alpha, secs) = if solver == SolverKind::Linear {
                let (x, secs) = timed(|| solve_linreg(&folded.c, &folded.y));
                (x?, None, secs)
            } else {
                let (out, secs) = timed(|| cv_on_coreset(a, b, &folded, grid, solver));
                let out = out?;
                (out.x, Some(out.best_alpha), secs)
            };
            Ok(Outcome {
                x: to_f64(&x),
                build_seconds: Some(build_secs),
                solve_seconds: secs,
                coreset_builds: folded.folds(),
                best_alpha,
            })
        }
        (Method::SketchCholesky, _) => {
            let (s, secs) = timed(|| sketch_cholesky(a, b));
            sketched(s, secs)
        }
        (Method::SketchSvd, _) => {
            let (s, secs) = timed(|| sketch_svd(a, b));
            sketched(s, secs)
        }
        (Method::SketchInverse, _) => {
            let (x, secs) = timed(|| sketch_inverse(a, b));
            Ok(plain(x?, secs, None))
        }
    }
}

/// Everything that identifies one problem instance in the records.
struct Cell<'a> {
    cfg: &'a BenchConfig,
    solver: SolverKind,
    grid: &'a RegularizationGrid,
    trial: usize,
    seed: u64,
}

/// Runs every configured method on `(a, b)` and compares each against the
/// `f64` plain solution.
fn run_cell(cell: &Cell<'_>, a: &DenseMatrix<f64>, b: &[f64]) -> Result<Vec<TrialRecord>> {
    let cfg = cell.cfg;
    let f64_outcomes: Vec<(Method, Result<Outcome>)>;
    let outcomes = match cfg.precision {
        Precision::F64 => {
            f64_outcomes = cfg
                .methods
                .iter()
                .map(|&m| (m, run_method(cfg, m, cell.solver, cell.grid, a, b)))
                .collect();
            f64_outcomes
        }
        Precision::F32 => {
            let a32 = a.cast::<f32>();
            let b32: Vec<f32> = b.iter().map(|&v| v as f32).collect();
            cfg.methods
                .iter()
                .map(|&m| (m, run_method(cfg, m, cell.solver, cell.grid, &a32, &b32)))
                .collect()
        }
    };

    let reused = match cfg.precision {
        Precision::F64 => outcomes
            .iter()
            .find(|(m, _)| *m == Method::Plain)
            .and_then(|(_, o)| o.as_ref().ok())
            .map(|o| o.x.clone()),
        Precision::F32 => None,
    };
    let truth = match reused {
        Some(x) => x,
        None => run_method(cfg, Method::Plain, cell.solver, cell.grid, a, b)?.x,
    };

    let alpha_count = if cell.solver == SolverKind::Linear {
        0
    } else {
        cell.grid.alphas.len()
    };
    Ok(outcomes
        .into_iter()
        .map(|(method, outcome)| {
            let mut record = TrialRecord {
                method: method.to_string(),
                solver: cell.solver.to_string(),
                precision: cfg.precision.to_string(),
                n: a.rows(),
                d: a.cols(),
                alpha_count,
                m: cfg.m,
                trial: cell.trial,
                seed: cell.seed,
                wall_time_seconds: 0.0,
                coreset_build_seconds: None,
                solve_seconds: 0.0,
                max_abs_error: None,
                l2_error: None,
                cholesky_failures: 0,
                coreset_builds: 0,
                best_alpha: None,
                status: "ok".into(),
            };
            match outcome {
                Ok(o) => {
                    let diff: Vec<f64> = o.x.iter().zip(&truth).map(|(u, v)| u - v).collect();
                    record.max_abs_error = Some(diff.iter().fold(0.0, |m, v| m.max(v.abs())));
                    record.l2_error = Some(diff.iter().map(|v| v * v).sum::<f64>().sqrt());
                    record.wall_time_seconds = o.build_seconds.unwrap_or(0.0) + o.solve_seconds;
                    record.coreset_build_seconds = o.build_seconds;
                    record.solve_seconds = o.solve_seconds;
                    record.coreset_builds = o.coreset_builds;
                    record.best_alpha = o.best_alpha;
                }
                Err(e) => {
                    if matches!(e, Error::NotPositiveDefinite { .. }) {
                        record.cholesky_failures = 1;
                    }
                    record.status = e.to_string();
                }
            }
            record
        })
        .collect())
}

/// The `n`-row problem for trial `trial`. CSV data is truncated to its
/// first `n` rows and is the same for every trial.
fn problem(cfg: &BenchConfig, n: Option<usize>, seed: u64) -> Result<(DenseMatrix<f64>, Vec<f64>)> {
    let ds = load::<f64>(&cfg.dataset.spec(n, seed))?;
    match n {
        Some(n) if n < ds.a.rows() => Ok((ds.a.row_range(0, n)?, ds.b[..n].to_vec())),
        _ => Ok((ds.a, ds.b)),
    }
}

/// Wall time and accuracy of every method for each size in `sizes`.
pub fn run_size_sweep(cfg: &BenchConfig) -> Result<BenchmarkReport> {
    cfg.validate()?;
    let grid = cfg.grid(cfg.alpha_count)?;
    let sizes: Vec<Option<usize>> = if cfg.sizes.is_empty() {
        vec![None]
    } else {
        cfg.sizes.iter().map(|&n| Some(n)).collect()
    };
    let mut report = BenchmarkReport::new("sweep", cfg.clone());
    for n in sizes {
        for trial in 0..cfg.trials {
            let seed = cfg.seed + trial as u64;
            let (a, b) = problem(cfg, n, seed)?;
            let cell = Cell {
                cfg,
                solver: cfg.solver,
                grid: &grid,
                trial,
                seed,
            };
            report.records.extend(run_cell(&cell, &a, &b)?);
        }
    }
    report.summarize();
    Ok(report)
}

/// Cross-validation wall time for each grid size in `alpha_counts`.
pub fn run_cv_sweep(cfg: &BenchConfig) -> Result<BenchmarkReport> {
    cfg.validate()?;
    if cfg.solver == SolverKind::Linear {
        return Err(Error::InvalidParameter(
            "cv-sweep needs a regularized solver (ridge, lasso or elastic)".into(),
        ));
    }
    let mut report = BenchmarkReport::new("cv-sweep", cfg.clone());
    for &count in &cfg.alpha_counts {
        let grid = cfg.grid(count)?;
        for trial in 0..cfg.trials {
            let seed = cfg.seed + trial as u64;
            let (a, b) = problem(cfg, None, seed)?;
            let cell = Cell {
                cfg,
                solver: cfg.solver,
                grid: &grid,
                trial,
                seed,
            };
            report.records.extend(run_cell(&cell, &a, &b)?);
        }
    }
    report.summarize();
    Ok(report)
}

/// `bins + 1` log-spaced edges over `[lo, hi]`.
pub fn log_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / bins as f64;
    (0..=bins).map(|i| lo * (step * i as f64).exp()).collect()
}

/// Bin of `v`; values below the first edge land in bin 0 and values above
/// the last in the final bin.
pub fn bin_index(edges: &[f64], v: f64) -> usize {
    let bins = edges.len() - 1;
    edges[1..bins].iter().take_while(|&&e| v >= e).count()
}

/// Linear-regression error of every method against the `f64` solution,
/// binned per method.
pub fn run_accuracy_histogram(cfg: &BenchConfig) -> Result<BenchmarkReport> {
    cfg.validate()?;
    let grid = cfg.grid(1)?;
    let edges = log_edges(cfg.bin_range[0], cfg.bin_range[1], cfg.bins);
    let mut report = BenchmarkReport::new("histogram", cfg.clone());
    for trial in 0..cfg.trials {
        let seed = cfg.seed + trial as u64;
        let (a, b) = problem(cfg, cfg.sizes.first().copied(), seed)?;
        let cell = Cell {
            cfg,
            solver: SolverKind::Linear,
            grid: &grid,
            trial,
            seed,
        };
        report.records.extend(run_cell(&cell, &a, &b)?);
    }
    for &method in &cfg.methods {
        let name = method.to_string();
        let rows: Vec<&TrialRecord> = report.records.iter().filter(|r| r.method == name).collect();
        let errors: Vec<f64> = rows.iter().filter_map(|r| r.max_abs_error).collect();
        let mut counts = vec![0; cfg.bins];
        for &e in &errors {
            counts[bin_index(&edges, e)] += 1;
        }
        report.histograms.push(Histogram {
            method: name,
            edges: edges.clone(),
            counts,
            median_error: median(errors),
            failures: rows.iter().filter(|r| !r.is_ok()).count(),
        });
    }
    report.summarize();
    Ok(report)
}
