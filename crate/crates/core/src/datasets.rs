//! Seeded synthetic data and CSV ingestion.
//!
//! Synthetic entries come from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. Each draw takes one `u64`, keeps its
//! top 53 bits as `u ∈ [0, 1)` and returns `low + (high − low)·u`. Rows are
//! generated in order; within a row the `d` entries of `A` come first and
//! the target `b_i` last.

use std::io::{Read, Write};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::real::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Synthetic {
        n: usize,
        d: usize,
        low: f64,
        high: f64,
        seed: u64,
    },
    Csv {
        path: PathBuf,
        /// 0-based column indices.
        feature_columns: Vec<usize>,
        target_column: usize,
        header: bool,
    },
}

/// What to do with CSV rows holding a missing or non-numeric cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum InvalidRows {
    /// Fail with the location of the first bad cell.
    #[default]
    Reject,
    /// Skip the row and count it.
    Drop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub source: DataSource,
    pub invalid_rows: InvalidRows,
}

impl DatasetSpec {
    pub fn synthetic(n: usize, d: usize, low: f64, high: f64, seed: u64) -> Self {
        Self {
            source: DataSource::Synthetic { n, d, low, high, seed },
            invalid_rows: InvalidRows::Reject,
        }
    }

    pub fn csv(path: impl Into<PathBuf>, feature_columns: Vec<usize>, target_column: usize, header: bool) -> Self {
        Self {
            source: DataSource::Csv {
                path: path.into(),
                feature_columns,
                target_column,
                header,
            },
            invalid_rows: InvalidRows::Reject,
        }
    }
}

/// A regression problem `(A, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T: Real> {
    pub a: DenseMatrix<T>,
    pub b: Vec<T>,
    /// CSV rows skipped under [`InvalidRows::Drop`].
    pub dropped_rows: usize,
}

pub fn load<T: Real>(spec: &DatasetSpec) -> Result<Dataset<T>> {
    match &spec.source {
        &DataSource::Synthetic { n, d, low, high, seed } => {
            let (a, b) = synthetic(n, d, low, high, seed)?;
            Ok(Dataset { a, b, dropped_rows: 0 })
        }
        DataSource::Csv {
            path,
            feature_columns,
            target_column,
            header,
        } => {
            let file = std::fs::File::open(path)?;
            read_csv(file, feature_columns, *target_column, *header, spec.invalid_rows)
        }
    }
}

/// `n × d` matrix and `n` targets, uniform on `[low, high)`.
pub fn synthetic<T: Real>(n: usize, d: usize, low: f64, high: f64, seed: u64) -> Result<(DenseMatrix<T>, Vec<T>)> {
    if n == 0 || d == 0 {
        return Err(Error::EmptyInput);
    }
    if !(low.is_finite() && high.is_finite() && low < high) {
        return Err(Error::InvalidParameter(format!("need low < high, got [{low}, {high})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = high - low;
    let mut data = Vec::with_capacity(n * d);
    let mut b = Vec::with_capacity(n);
    for _ in 0..n {
        for _ in 0..d {
            data.push(T::cast(low + width * rng.random::<f64>()));
        }
        b.push(T::cast(low + width * rng.random::<f64>()));
    }
    Ok((DenseMatrix::from_row_major(n, d, data)?, b))
}

/// Reads the selected columns of a comma-separated file.
pub fn read_csv<T: Real, R: Read>(
    reader: R,
    feature_columns: &[usize],
    target_column: usize,
    header: bool,
    invalid_rows: InvalidRows,
) -> Result<Dataset<T>> {
    if feature_columns.is_empty() {
        return Err(Error::InvalidParameter("no feature columns selected".into()));
    }
    for (i, &c) in feature_columns.iter().enumerate() {
        if c == target_column || feature_columns[..i].contains(&c) {
            return Err(Error::InvalidParameter(format!(
                "feature columns must be distinct and differ from the target, column {c} repeats"
            )));
        }
    }

    let mut csv = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .from_reader(reader);
    let d = feature_columns.len();
    let mut data = Vec::new();
    let mut b = Vec::new();
    let mut dropped = 0;
    let mut row = vec![T::zero(); d + 1];
    for (i, record) in csv.records().enumerate() {
        let record = record.map_err(|e| Error::Io(e.to_string()))?;
        let line = i + usize::from(header);
        let cells = feature_columns.iter().chain(std::iter::once(&target_column));
        let parsed: Result<()> = cells.zip(row.iter_mut()).try_for_each(|(&col, out)| {
            let cell = record.get(col).ok_or(Error::MissingColumn { row: line, col })?;
            *out = parse_cell(cell).ok_or_else(|| Error::Parse {
                row: line,
                col,
                message: format!("'{cell}' is not a finite number"),
            })?;
            Ok(())
        });
        match (parsed, invalid_rows) {
            (Ok(()), _) => {
                data.extend_from_slice(&row[..d]);
                b.push(row[d]);
            }
            (Err(_), InvalidRows::Drop) => dropped += 1,
            (Err(e), InvalidRows::Reject) => return Err(e),
        }
    }
    Ok(Dataset {
        a: DenseMatrix::from_row_major(b.len(), d, data)?,
        b,
        dropped_rows: dropped,
    })
}

fn parse_cell<T: Real>(cell: &str) -> Option<T> {
    let v: f64 = cell.trim().parse().ok()?;
    let v = T::cast(v);
    v.is_finite_value().then_some(v)
}

/// Writes `(A | b)` with 17 significant digits, so reading it back gives
/// bitwise-equal values.
pub fn write_csv<T: Real, W: Write>(writer: W, a: &DenseMatrix<T>, b: &[T], header: bool) -> Result<()> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let mut csv = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Io(e.to_string());
    if header {
        let names: Vec<String> = (0..a.cols()).map(|j| format!("x{j}")).chain(["y".into()]).collect();
        csv.write_record(&names).map_err(io)?;
    }
    for (r, &y) in a.row_iter().zip(b) {
        let fields = r.iter().chain(std::iter::once(&y)).map(|v| format!("{:.16e}", v.as_f64()));
        csv.write_record(fields).map_err(io)?;
    }
    csv.flush()?;
    Ok(())
}
