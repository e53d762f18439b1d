use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use caratheodory::datasets::{DataSource, DatasetSpec, InvalidRows};
use caratheodory::lms::{CoresetParams, RegularizationGrid, SolverKind, DEFAULT_BLOCK_WIDTH};
use caratheodory::{Error, Precision, Result};
use serde::{Deserialize, Serialize};

/// A compression or baseline that a benchmark run can use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// The solver on the full data.
    Plain,
    /// Per-fold scaled-row coresets.
    Coreset,
    /// Per-fold `(d+1)`-row coresets.
    CoresetPp,
    SketchCholesky,
    SketchSvd,
    SketchInverse,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Plain,
        Method::Coreset,
        Method::CoresetPp,
        Method::SketchCholesky,
        Method::SketchSvd,
        Method::SketchInverse,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Plain => "plain",
            Method::Coreset => "coreset",
            Method::CoresetPp => "coreset-pp",
            Method::SketchCholesky => "sketch-cholesky",
            Method::SketchSvd => "sketch-svd",
            Method::SketchInverse => "sketch-inverse",
        }
    }

    pub fn is_baseline(&self) -> bool {
        matches!(self, Method::SketchCholesky | Method::SketchSvd | Method::SketchInverse)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method '{s}'")))
    }
}

/// Serde through `Display` / `FromStr`.
mod as_str {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

mod as_str_list {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(de::Error::custom))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DatasetConfig {
    Synthetic {
        n: usize,
        d: usize,
        low: f64,
        high: f64,
    },
    Csv {
        path: PathBuf,
        /// 0-based feature columns.
        features: Vec<usize>,
        target: usize,
        #[serde(default)]
        header: bool,
        #[serde(default)]
        drop_invalid: bool,
    },
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig::Synthetic {
            n: 100_000,
            d: 7,
            low: 0.0,
            high: 1000.0,
        }
    }
}

impl DatasetConfig {
    /// The dataset spec for `n` rows (synthetic only) drawn with `seed`.
    pub fn spec(&self, n: Option<usize>, seed: u64) -> DatasetSpec {
        match self {
            &DatasetConfig::Synthetic { n: rows, d, low, high } => {
                DatasetSpec::synthetic(n.unwrap_or(rows), d, low, high, seed)
            }
            DatasetConfig::Csv {
                path,
                features,
                target,
                header,
                drop_invalid,
            } => DatasetSpec {
                source: DataSource::Csv {
                    path: path.clone(),
                    feature_columns: features.clone(),
                    target_column: *target,
                    header: *header,
                },
                invalid_rows: if *drop_invalid {
                    InvalidRows::Drop
                } else {
                    InvalidRows::Reject
                },
            },
        }
    }

    pub fn default_rows(&self) -> Option<usize> {
        match self {
            DatasetConfig::Synthetic { n, .. } => Some(*n),
            DatasetConfig::Csv { .. } => None,
        }
    }
}

/// Every parameter of a benchmark run. Missing JSON fields take the
/// defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub dataset: DatasetConfig,
    /// Trial `t` uses seed `seed + t`.
    pub seed: u64,
    #[serde(with = "as_str")]
    pub precision: Precision,
    #[serde(with = "as_str_list")]
    pub methods: Vec<Method>,
    #[serde(with = "as_str")]
    pub solver: SolverKind,
    /// Fold count.
    pub m: usize,
    /// Explicit grid; when absent `alpha_count` values are log-spaced over
    /// `alpha_range`.
    pub alphas: Option<Vec<f64>>,
    pub alpha_count: usize,
    pub alpha_range: [f64; 2],
    /// Grid sizes for `cv-sweep`.
    pub alpha_counts: Vec<usize>,
    pub rho: f64,
    pub k: Option<usize>,
    pub k1: Option<usize>,
    pub k2: Option<usize>,
    /// Target block width `d'` for the default `k1`, `k2`.
    pub block_width: usize,
    pub trials: usize,
    /// Row counts for `sweep`; empty means the dataset's own size.
    pub sizes: Vec<usize>,
    /// Histogram bin count over log-spaced edges spanning `bin_range`.
    pub bins: usize,
    pub bin_range: [f64; 2],
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetConfig::default(),
            seed: 0,
            precision: Precision::F64,
            methods: vec![Method::Plain, Method::Coreset, Method::CoresetPp],
            solver: SolverKind::Ridge,
            m: 3,
            alphas: None,
            alpha_count: 100,
            alpha_range: [1e-3, 1e3],
            alpha_counts: vec![10, 20, 50, 100],
            rho: 0.5,
            k: None,
            k1: None,
            k2: None,
            block_width: DEFAULT_BLOCK_WIDTH,
            trials: 5,
            sizes: Vec::new(),
            bins: 14,
            bin_range: [1e-12, 1e2],
        }
    }
}

impl BenchConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("no methods selected".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        if self.bins == 0 || !(self.bin_range[0] > 0.0 && self.bin_range[1] > self.bin_range[0]) {
            return Err(Error::InvalidParameter("histogram needs bins >= 1 and 0 < low < high".into()));
        }
        self.grid(self.alpha_count)?;
        Ok(())
    }

    /// The regularization grid with `count` values unless `alphas` is set.
    pub fn grid(&self, count: usize) -> Result<RegularizationGrid> {
        match &self.alphas {
            Some(a) => RegularizationGrid::new(a.clone(), self.rho, self.m),
            None => RegularizationGrid::log_spaced(self.alpha_range[0], self.alpha_range[1], count, self.rho, self.m),
        }
    }

    /// Coreset parameters for `d` features, filling unset values from the
    /// defaults `k = 2(d+1)² + 2`, `k2 = ⌈(d+1)²/d'⌉`, `k1 = 2d' + 2`.
    pub fn coreset_params(&self, method: Method, d: usize) -> CoresetParams {
        let defaults = match method {
            Method::CoresetPp => CoresetParams::default_sparse(d, self.block_width),
            _ => CoresetParams::default_exact(d),
        };
        match defaults {
            CoresetParams::Exact { k } => CoresetParams::Exact { k: self.k.unwrap_or(k) },
            CoresetParams::SparsePlusPlus { k1, k2 } => CoresetParams::SparsePlusPlus {
                k1: self.k1.unwrap_or(k1),
                k2: self.k2.unwrap_or(k2),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_the_experiment_table() {
        let c = BenchConfig::default();
        assert_eq!((c.m, c.alpha_count, c.rho), (3, 100, 0.5));
        assert_eq!(c.coreset_params(Method::Coreset, 7), CoresetParams::Exact { k: 130 });
        assert_eq!(
            c.coreset_params(Method::CoresetPp, 7),
            CoresetParams::SparsePlusPlus { k1: 26, k2: 6 }
        );
    }

    #[test]
    fn json_round_trip_and_partial_files() {
        let c = BenchConfig::default();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<BenchConfig>(&text).unwrap(), c);
        let partial: BenchConfig =
            serde_json::from_str(r#"{"solver": "lasso", "methods": ["plain", "sketch-svd"], "precision": "f32"}"#)
                .unwrap();
        assert_eq!(partial.solver, SolverKind::Lasso);
        assert_eq!(partial.methods, vec![Method::Plain, Method::SketchSvd]);
        assert_eq!(partial.precision, Precision::F32);
        assert!(serde_json::from_str::<BenchConfig>(r#"{"methods": ["nope"]}"#).is_err());
    }
}
