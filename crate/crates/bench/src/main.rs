use std::path::PathBuf;
use std::process::ExitCode;

use caratheodory::lms::SolverKind;
use caratheodory::{Precision, Result};
use caratheodory_bench::config::{BenchConfig, DatasetConfig, Method};
use caratheodory_bench::report::{BenchmarkReport, Format};
use caratheodory_bench::{runner, verify};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cara-bench", version, about = "Coreset benchmarks and invariant checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wall time and error of each method over row counts.
    Sweep(RunArgs),
    /// Cross-validation wall time over regularization grid sizes.
    CvSweep(RunArgs),
    /// Binned f32 linear-regression error against the f64 solution.
    Histogram(RunArgs),
    /// Runs the invariant suite; exits nonzero on any violation.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV dataset path.
    #[arg(long, conflicts_with = "synthetic")]
    dataset: Option<PathBuf>,
    /// 0-based feature columns of the CSV dataset.
    #[arg(long, value_delimiter = ',', requires = "dataset")]
    features: Vec<usize>,
    /// 0-based target column of the CSV dataset.
    #[arg(long, requires = "dataset")]
    target: Option<usize>,
    /// The CSV dataset has a header line.
    #[arg(long, requires = "dataset")]
    header: bool,
    /// Drop CSV rows with missing or non-numeric cells instead of failing.
    #[arg(long, requires = "dataset")]
    drop_invalid: bool,
    /// Uniform synthetic data as `n,d,low,high`.
    #[arg(long, value_parser = parse_synthetic)]
    synthetic: Option<DatasetConfig>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    precision: Option<Precision>,
    /// Comma-separated: plain, coreset, coreset-pp, sketch-cholesky,
    /// sketch-svd, sketch-inverse.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    /// linear, ridge, lasso or elastic.
    #[arg(long)]
    solver: Option<SolverKind>,
    /// Fold count.
    #[arg(long)]
    m: Option<usize>,
    /// Explicit regularization grid.
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
    /// Size of the log-spaced grid when `--alphas` is absent.
    #[arg(long)]
    alpha_count: Option<usize>,
    /// Grid sizes for `cv-sweep`.
    #[arg(long, value_delimiter = ',')]
    alpha_counts: Vec<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    /// Target block width for the default `k1`, `k2`.
    #[arg(long)]
    block_width: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Row counts for `sweep`; the first one sets the `histogram` size.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long)]
    bins: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn parse_synthetic(s: &str) -> std::result::Result<DatasetConfig, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, d, low, high] = parts[..] else {
        return Err("expected n,d,low,high".into());
    };
    let int = |v: &str| v.parse::<usize>().map_err(|e| format!("'{v}': {e}"));
    let real = |v: &str| v.parse::<f64>().map_err(|e| format!("'{v}': {e}"));
    Ok(DatasetConfig::Synthetic {
        n: int(n)?,
        d: int(d)?,
        low: real(low)?,
        high: real(high)?,
    })
}

/// Defaults for `histogram` when no config file is given: f32 linear
/// regression, every compression and baseline, 20 trials of 10⁵ rows.
fn histogram_defaults() -> BenchConfig {
    BenchConfig {
        dataset: DatasetConfig::Synthetic {
            n: 100_000,
            d: 5,
            low: 0.0,
            high: 1000.0,
        },
        precision: Precision::F32,
        solver: SolverKind::Linear,
        methods: Method::ALL[1..].to_vec(),
        trials: 20,
        ..BenchConfig::default()
    }
}

impl RunArgs {
    fn resolve(self, base: BenchConfig) -> Result<(BenchConfig, Option<PathBuf>, Format)> {
        let mut cfg = match &self.config {
            Some(path) => BenchConfig::from_json_file(path)?,
            None => base,
        };
        if let Some(path) = self.dataset {
            cfg.dataset = DatasetConfig::Csv {
                path,
                features: self.features,
                target: self.target.ok_or_else(|| {
                    caratheodory::Error::InvalidParameter("--dataset needs --target".into())
                })?,
                header: self.header,
                drop_invalid: self.drop_invalid,
            };
        }
        if let Some(s) = self.synthetic {
            cfg.dataset = s;
        }
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            )*};
        }
        set!(seed, precision, solver, m, alpha_count, rho, block_width, trials, bins);
        macro_rules! set_list {
            ($($field:ident),*) => {$(
                if !self.$field.is_empty() {
                    cfg.$field = self.$field;
                }
            )*};
        }
        set_list!(methods, alpha_counts, sizes);
        if !self.alphas.is_empty() {
            cfg.alphas = Some(self.alphas);
        }
        cfg.k = self.k.or(cfg.k);
        cfg.k1 = self.k1.or(cfg.k1);
        cfg.k2 = self.k2.or(cfg.k2);
        cfg.validate()?;
        Ok((cfg, self.out, self.format))
    }
}

fn run(
    args: RunArgs,
    base: BenchConfig,
    f: fn(&BenchConfig) -> Result<BenchmarkReport>,
) -> Result<()> {
    let (cfg, out, format) = args.resolve(base)?;
    let report = f(&cfg)?;
    for s in &report.summaries {
        eprintln!(
            "{:<16} n={:<8} |A|={:<4} trials={} failures={} median time={} median error={}",
            s.method,
            s.n,
            s.alpha_count,
            s.trials,
            s.failures,
            s.median_wall_time_seconds.map_or("-".into(), |v| format!("{v:.4} s")),
            s.median_max_abs_error.map_or("-".into(), |v| format!("{v:.3e}")),
        );
    }
    match out {
        Some(path) => report.emit(&path, format),
        None => report.write(std::io::stdout().lock(), format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => run(args, BenchConfig::default(), runner::run_size_sweep),
        Command::CvSweep(args) => run(args, BenchConfig::default(), runner::run_cv_sweep),
        Command::Histogram(mut args) => {
            args.solver = Some(SolverKind::Linear);
            run(args, histogram_defaults(), runner::run_accuracy_histogram)
        }
        Command::Verify { seed } => {
            let mut ok = true;
            for check in verify::run_all(seed) {
                println!("{check}");
                ok &= check.passed;
            }
            return if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
