//! Fold-aware coresets for least-mean-squares solvers.
//!
//! `(A | b)` is split into `m` row folds and each fold is replaced by a
//! matrix with the same Gram matrix, so for every `x` and every fold
//! `‖A_i x − b_i‖ = ‖C_i x − y_i‖`. Solvers whose objective is normalized by
//! the row count additionally need the scale `β = √(rows(C) / n)`.

mod cv;
mod solvers;

use std::ops::Range;

pub use cv::{boosted_cv, cv_on_coreset, plain_cv, CvOutcome, RegularizationGrid};
pub use solvers::{
    coordinate_descent, solve_elastic, solve_lasso, solve_linreg, solve_ridge, CdOptions, SolverKind,
};

use crate::covariance::{caratheodory_matrix, sparse_caratheodory_matrix};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::real::Real;
use crate::sparse::check_sparse_params;
use crate::weighted::PartitionSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoresetVariant {
    /// Scaled row subsets, up to `(d+1)² + 1` rows per fold.
    Exact,
    /// `d + 1` reconstructed rows per fold.
    SparsePlusPlus,
}

/// Construction parameters for a fold coreset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoresetParams {
    Exact { k: usize },
    SparsePlusPlus { k1: usize, k2: usize },
}

impl CoresetParams {
    /// `k = 2(d+1)² + 2` for `d` feature columns.
    pub fn default_exact(d: usize) -> Self {
        let dd = (d + 1) * (d + 1);
        CoresetParams::Exact { k: 2 * dd + 2 }
    }

    /// `k2 = ⌈(d+1)² / d'⌉` and `k1 = 2d' + 2` for a target block width `d'`.
    pub fn default_sparse(d: usize, block_width: usize) -> Self {
        let dd = (d + 1) * (d + 1);
        let width = block_width.clamp(1, dd);
        CoresetParams::SparsePlusPlus {
            k1: 2 * width + 2,
            k2: dd.div_ceil(width),
        }
    }

    pub fn variant(&self) -> CoresetVariant {
        match self {
            CoresetParams::Exact { .. } => CoresetVariant::Exact,
            CoresetParams::SparsePlusPlus { .. } => CoresetVariant::SparsePlusPlus,
        }
    }
}

/// Block width used by [`CoresetParams::default_sparse`] when none is given.
pub const DEFAULT_BLOCK_WIDTH: usize = 12;

/// Stacked per-fold coresets `(C, y)` of `(A | b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldedCoreset<T: Real> {
    pub c: DenseMatrix<T>,
    pub y: Vec<T>,
    /// Rows of `C` belonging to each fold.
    pub fold_boundaries: Vec<Range<usize>>,
    /// Rows of `A` belonging to each fold.
    pub source_folds: Vec<Range<usize>>,
    pub beta: T,
    pub variant: CoresetVariant,
}

impl<T: Real> FoldedCoreset<T> {
    pub fn folds(&self) -> usize {
        self.fold_boundaries.len()
    }

    pub fn source_rows(&self) -> usize {
        self.source_folds.last().map_or(0, |r| r.end)
    }

    /// `(βC, βy)`.
    pub fn scaled(&self) -> (DenseMatrix<T>, Vec<T>) {
        (
            self.c.scaled(self.beta),
            self.y.iter().map(|&v| v * self.beta).collect(),
        )
    }

    /// Rows of the stacked coreset restricted to fold `i`.
    pub fn fold(&self, i: usize) -> Result<(DenseMatrix<T>, Vec<T>)> {
        let r = self.fold_boundaries[i].clone();
        Ok((self.c.row_range(r.start, r.end)?, self.y[r].to_vec()))
    }
}

/// Contiguous row folds; when `m` does not divide `n` the first `n mod m`
/// folds get one extra row.
pub fn fold_ranges(n: usize, m: usize) -> Result<Vec<Range<usize>>> {
    if m == 0 || m > n {
        return Err(Error::FoldTooSmall { m, rows: n });
    }
    Ok(PartitionSpec::contiguous(n, m)?.clusters().collect())
}

/// √(a / b) in the working precision.
pub(crate) fn sqrt_ratio<T: Real>(a: usize, b: usize) -> T {
    T::cast((a as f64 / b as f64).sqrt())
}

/// Per-fold scaled-row coresets of `(A | b)` stacked into `(C, y)`.
pub fn lms_coreset<T: Real>(a: &DenseMatrix<T>, b: &[T], m: usize, k: usize) -> Result<FoldedCoreset<T>> {
    let dd = (a.cols() + 1) * (a.cols() + 1);
    if k < dd + 2 {
        return Err(Error::InvalidK { k, min: dd + 2 });
    }
    build_folded(a, b, m, CoresetParams::Exact { k })
}

/// Per-fold `(d+1)`-row reconstructed coresets of `(A | b)` stacked into
/// `(C, y)`.
pub fn lms_coreset_pp<T: Real>(
    a: &DenseMatrix<T>,
    b: &[T],
    m: usize,
    k1: usize,
    k2: usize,
) -> Result<FoldedCoreset<T>> {
    build_folded(a, b, m, CoresetParams::SparsePlusPlus { k1, k2 })
}

/// Builds the fold coresets for either parameter set.
pub fn build_folded<T: Real>(
    a: &DenseMatrix<T>,
    b: &[T],
    m: usize,
    params: CoresetParams,
) -> Result<FoldedCoreset<T>> {
    let n = a.rows();
    let ab = a.append_column(b)?;
    let folds = fold_ranges(n, m)?;
    let dd = ab.cols() * ab.cols();
    match params {
        CoresetParams::Exact { k } if k < dd + 2 => return Err(Error::InvalidK { k, min: dd + 2 }),
        CoresetParams::SparsePlusPlus { k1, k2 } => {
            let smallest = folds.iter().map(|r| r.len()).min().unwrap_or(0);
            check_sparse_params(smallest, dd, k1, k2)?;
        }
        _ => {}
    }

    let mut blocks = Vec::with_capacity(m);
    for r in &folds {
        let fold = ab.row_range(r.start, r.end)?;
        let s = match params {
            CoresetParams::Exact { k } => caratheodory_matrix(&fold, k)?,
            CoresetParams::SparsePlusPlus { k1, k2 } => sparse_caratheodory_matrix(&fold, k1, k2)?,
        };
        blocks.push(s.matrix);
    }
    let mut boundaries = Vec::with_capacity(m);
    let mut at = 0;
    for s in &blocks {
        boundaries.push(at..at + s.rows());
        at += s.rows();
    }
    let refs: Vec<&DenseMatrix<T>> = blocks.iter().collect();
    let (c, y) = DenseMatrix::vstack(&refs)?.split_last_column()?;
    Ok(FoldedCoreset {
        beta: sqrt_ratio(c.rows(), n),
        c,
        y,
        fold_boundaries: boundaries,
        source_folds: folds,
        variant: params.variant(),
    })
}

/// Builds the coreset and runs one solver on it, applying `β` when the
/// solver's loss is normalized by the row count.
pub fn boost_fit<T: Real>(
    a: &DenseMatrix<T>,
    b: &[T],
    m: usize,
    params: CoresetParams,
    solver: SolverKind,
    alpha: f64,
    rho: f64,
) -> Result<Vec<T>> {
    let folded = build_folded(a, b, m, params)?;
    if solver.row_normalized() {
        let (c, y) = folded.scaled();
        solver.fit(&c, &y, alpha, rho)
    } else {
        solver.fit(&folded.c, &folded.y, alpha, rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_put_remainder_first() {
        assert_eq!(fold_ranges(10, 3).unwrap(), vec![0..4, 4..7, 7..10]);
        assert_eq!(fold_ranges(3, 4), Err(Error::FoldTooSmall { m: 4, rows: 3 }));
        assert_eq!(fold_ranges(3, 0), Err(Error::FoldTooSmall { m: 0, rows: 3 }));
    }

    #[test]
    fn table_defaults() {
        assert_eq!(CoresetParams::default_exact(7), CoresetParams::Exact { k: 130 });
        assert_eq!(
            CoresetParams::default_sparse(7, 12),
            CoresetParams::SparsePlusPlus { k1: 26, k2: 6 }
        );
    }

    #[test]
    fn zero_matrix_gives_zero_coreset() {
        let a = DenseMatrix::<f64>::zeros(40, 3).unwrap();
        let b = vec![0.0; 40];
        let f = lms_coreset(&a, &b, 2, 34).unwrap();
        assert!(f.c.as_slice().iter().all(|&v| v == 0.0));
        assert!(f.y.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn exact_k_is_checked() {
        let a = DenseMatrix::<f64>::zeros(40, 3).unwrap();
        let b = vec![0.0; 40];
        assert_eq!(lms_coreset(&a, &b, 2, 17), Err(Error::InvalidK { k: 17, min: 18 }));
    }
}
