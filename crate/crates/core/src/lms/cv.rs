use std::ops::Range;

use super::{build_folded, fold_ranges, sqrt_ratio, CoresetParams, FoldedCoreset, SolverKind};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::real::Real;

/// Candidate regularization strengths, elastic-net mix and fold count.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationGrid {
    pub alphas: Vec<f64>,
    pub rho: f64,
    pub folds: usize,
}

impl RegularizationGrid {
    pub fn new(alphas: Vec<f64>, rho: f64, folds: usize) -> Result<Self> {
        let grid = Self { alphas, rho, folds };
        grid.validate()?;
        Ok(grid)
    }

    /// `count` values spaced evenly on a log scale over `[lo, hi]`.
    pub fn log_spaced(lo: f64, hi: f64, count: usize, rho: f64, folds: usize) -> Result<Self> {
        if !(lo > 0.0 && hi >= lo) || count == 0 {
            return Err(Error::InvalidParameter(format!(
                "log-spaced grid needs 0 < lo <= hi and count >= 1, got [{lo}, {hi}] x {count}"
            )));
        }
        let alphas = if count == 1 {
            vec![lo]
        } else {
            let step = (hi / lo).ln() / (count - 1) as f64;
            (0..count).map(|i| lo * (step * i as f64).exp()).collect()
        };
        Self::new(alphas, rho, folds)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::InvalidParameter("empty alpha grid".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::InvalidParameter(format!("alpha must be finite and >= 0, got {a}")));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::InvalidParameter(format!("rho must lie in [0, 1], got {}", self.rho)));
        }
        if self.folds == 0 {
            return Err(Error::InvalidParameter("fold count must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome<T: Real> {
    /// Model refit with the selected `α` on all folds.
    pub x: Vec<T>,
    pub best_alpha: f64,
    /// Mean held-out MSE per entry of the grid, in grid order.
    pub scores: Vec<f64>,
    /// Number of per-fold coresets computed.
    pub coreset_builds: usize,
}

/// `m`-fold cross validation on fold coresets.
///
/// One coreset is built per fold. For each `α` and held-out fold the solver
/// is trained on the other folds' coresets and scored by MSE on the held-out
/// fold's original rows.
pub fn boosted_cv<T: Real>(
    a: &DenseMatrix<T>,
    b: &[T],
    grid: &RegularizationGrid,
    solver: SolverKind,
    params: CoresetParams,
) -> Result<CvOutcome<T>> {
    check_cv(grid)?;
    let folded = build_folded(a, b, grid.folds, params)?;
    cv_on_coreset(a, b, &folded, grid, solver)
}

/// The selection step of [`boosted_cv`] on coresets built beforehand; the
/// fold count of `folded` takes precedence over `grid.folds`.
pub fn cv_on_coreset<T: Real>(
    a: &DenseMatrix<T>,
    b: &[T],
    folded: &FoldedCoreset<T>,
    grid: &RegularizationGrid,
    solver: SolverKind,
) -> Result<CvOutcome<T>> {
    grid.validate()?;
    let m = folded.folds();
    let n = a.rows();
    if m < 2 {
        return Err(Error::InvalidParameter(format!("cross validation needs at least 2 folds, got {m}")));
    }
    if n != folded.source_rows() || b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: folded.source_rows(),
            found: n,
        });
    }

    let mut train = Vec::with_capacity(m);
    for held in 0..m {
        let mut blocks = Vec::with_capacity(m - 1);
        for j in (0..m).filter(|&j| j != held) {
            blocks.push(folded.fold(j)?);
        }
        let mats: Vec<&DenseMatrix<T>> = blocks.iter().map(|(c, _)| c).collect();
        let c = DenseMatrix::vstack(&mats)?;
        let y: Vec<T> = blocks.iter().flat_map(|(_, y)| y.iter().copied()).collect();
        if solver.row_normalized() {
            let beta: T = sqrt_ratio(c.rows(), n - folded.source_folds[held].len());
            train.push((c.scaled(beta), y.into_iter().map(|v| v * beta).collect()));
        } else {
            train.push((c, y));
        }
    }
    let full = if solver.row_normalized() {
        folded.scaled()
    } else {
        (folded.c.clone(), folded.y.clone())
    };

    let mut outcome = select(a, b, grid, solver, &folded.source_folds, &train, &full)?;
    outcome.coreset_builds = m;
    Ok(outcome)
}

/// `m`-fold cross validation on the original rows.
pub fn plain_cv<T: Real>(
    a: &DenseMatrix<T>,
    b: &[T],
    grid: &RegularizationGrid,
    solver: SolverKind,
) -> Result<CvOutcome<T>> {
    check_cv(grid)?;
    let n = a.rows();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let folds = fold_ranges(n, grid.folds)?;
    let mut train = Vec::with_capacity(folds.len());
    for held in &folds {
        let keep: Vec<usize> = (0..held.start).chain(held.end..n).collect();
        let y = keep.iter().map(|&i| b[i]).collect();
        train.push((a.select_rows(&keep)?, y));
    }
    select(a, b, grid, solver, &folds, &train, &(a.clone(), b.to_vec()))
}

fn check_cv(grid: &RegularizationGrid) -> Result<()> {
    grid.validate()?;
    if grid.folds < 2 {
        return Err(Error::InvalidParameter(format!(
            "cross validation needs at least 2 folds, got {}",
            grid.folds
        )));
    }
    Ok(())
}

fn select<T: Real>(
    a: &DenseMatrix<T>,
    b: &[T],
    grid: &RegularizationGrid,
    solver: SolverKind,
    folds: &[Range<usize>],
    train: &[(DenseMatrix<T>, Vec<T>)],
    full: &(DenseMatrix<T>, Vec<T>),
) -> Result<CvOutcome<T>> {
    let mut scores = vec![0.0; grid.alphas.len()];
    for (held, (c, y)) in folds.iter().zip(train) {
        let models = grid
            .alphas
            .iter()
            .map(|&alpha| solver.fit(c, y, alpha, grid.rho))
            .collect::<Result<Vec<_>>>()?;
        for (s, mse) in scores.iter_mut().zip(held_out_mse(a, b, held.clone(), &models)) {
            *s += mse;
        }
    }
    for s in &mut scores {
        *s /= folds.len() as f64;
    }

    let mut best = 0;
    for i in 1..scores.len() {
        let (s, t) = (scores[i], scores[best]);
        if s < t || (s == t && grid.alphas[i] < grid.alphas[best]) {
            best = i;
        }
    }
    let best_alpha = grid.alphas[best];
    let x = solver.fit(&full.0, &full.1, best_alpha, grid.rho)?;
    Ok(CvOutcome {
        x,
        best_alpha,
        scores,
        coreset_builds: 0,
    })
}

/// Mean squared residual of each model over rows `rows`, accumulated in
/// `f64`. The rows are read once for all models.
fn held_out_mse<T: Real>(a: &DenseMatrix<T>, b: &[T], rows: Range<usize>, models: &[Vec<T>]) -> Vec<f64> {
    let d = a.cols();
    let xs: Vec<f64> = models.iter().flatten().map(|v| v.as_f64()).collect();
    let mut sums = vec![0.0; models.len()];
    let mut row = vec![0.0; d];
    let len = rows.len();
    for i in rows {
        for (r, v) in row.iter_mut().zip(a.row(i)) {
            *r = v.as_f64();
        }
        let target = b[i].as_f64();
        for (sum, x) in sums.iter_mut().zip(xs.chunks_exact(d)) {
            let mut r = -target;
            for (u, w) in row.iter().zip(x) {
                r += u * w;
            }
            *sum += r * r;
        }
    }
    sums.into_iter().map(|s| s / len as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_data(n: usize) -> (DenseMatrix<f64>, Vec<f64>) {
        let a = DenseMatrix::from_fn(n, 3, |i, j| (((i + 1) * (j + 3) * 37) % 101) as f64 / 10.0).unwrap();
        let b = a.mul_vec(&[1.0, -2.0, 0.5]).unwrap();
        (a, b)
    }

    #[test]
    fn single_alpha_is_returned() {
        let (a, b) = linear_data(90);
        let grid = RegularizationGrid::new(vec![0.7], 0.5, 3).unwrap();
        let out = boosted_cv(&a, &b, &grid, SolverKind::Ridge, CoresetParams::default_exact(3)).unwrap();
        assert_eq!(out.best_alpha, 0.7);
        assert_eq!(out.scores.len(), 1);
        assert_eq!(out.coreset_builds, 3);
    }

    #[test]
    fn noiseless_ridge_picks_zero() {
        let (a, b) = linear_data(120);
        let grid = RegularizationGrid::new(vec![1e4, 0.0], 0.5, 3).unwrap();
        let boosted = boosted_cv(&a, &b, &grid, SolverKind::Ridge, CoresetParams::default_exact(3)).unwrap();
        let plain = plain_cv(&a, &b, &grid, SolverKind::Ridge).unwrap();
        assert_eq!(boosted.best_alpha, 0.0);
        assert_eq!(plain.best_alpha, 0.0);
        assert!((boosted.x[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn ties_go_to_smallest_alpha() {
        let (a, b) = linear_data(60);
        let grid = RegularizationGrid::new(vec![3.0, 1.0, 2.0], 0.5, 2).unwrap();
        let out = plain_cv(&a, &b, &grid, SolverKind::Linear).unwrap();
        assert_eq!(out.best_alpha, 1.0);
    }

    #[test]
    fn one_fold_is_rejected() {
        let (a, b) = linear_data(30);
        let grid = RegularizationGrid::new(vec![1.0], 0.5, 1).unwrap();
        assert!(matches!(plain_cv(&a, &b, &grid, SolverKind::Ridge), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn log_grid_endpoints() {
        let g = RegularizationGrid::log_spaced(1e-3, 1e1, 5, 0.5, 3).unwrap();
        assert_eq!(g.alphas.len(), 5);
        assert!((g.alphas[0] - 1e-3).abs() < 1e-15);
        assert!((g.alphas[4] - 10.0).abs() < 1e-12);
    }
}
