use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_solve, least_squares, solve_square};
use crate::matrix::DenseMatrix;
use crate::real::Real;

/// The four least-mean-squares solvers.
///
/// | solver  | objective                                                    |
/// |---------|--------------------------------------------------------------|
/// | linear  | `‖Cx − y‖²`                                                  |
/// | ridge   | `‖Cx − y‖² + α‖x‖²`                                          |
/// | lasso   | `(1/2r)‖Cx − y‖² + α‖x‖₁`                                     |
/// | elastic | `(1/2r)‖Cx − y‖² + ρα‖x‖² + ((1−ρ)/2)α‖x‖₁`                   |
///
/// where `r` is the number of rows of `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverKind {
    Linear,
    Ridge,
    Lasso,
    Elastic,
}

impl SolverKind {
    /// Whether the loss is divided by the row count, so a coreset needs the
    /// `β` scaling to reproduce the full-data objective.
    pub fn row_normalized(&self) -> bool {
        matches!(self, SolverKind::Lasso | SolverKind::Elastic)
    }

    /// Runs the solver; `alpha` is ignored by linear regression and `rho`
    /// is only read by the elastic net.
    pub fn fit<T: Real>(&self, c: &DenseMatrix<T>, y: &[T], alpha: f64, rho: f64) -> Result<Vec<T>> {
        match self {
            SolverKind::Linear => solve_linreg(c, y),
            SolverKind::Ridge => solve_ridge(c, y, alpha),
            SolverKind::Lasso => solve_lasso(c, y, alpha),
            SolverKind::Elastic => solve_elastic(c, y, alpha, rho),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Linear => "linear",
            SolverKind::Ridge => "ridge",
            SolverKind::Lasso => "lasso",
            SolverKind::Elastic => "elastic",
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(SolverKind::Linear),
            "ridge" => Ok(SolverKind::Ridge),
            "lasso" => Ok(SolverKind::Lasso),
            "elastic" => Ok(SolverKind::Elastic),
            other => Err(Error::InvalidParameter(format!("unknown solver '{other}'"))),
        }
    }
}

/// `argmin ‖Cx − y‖₂` through QR of `C`.
pub fn solve_linreg<T: Real>(c: &DenseMatrix<T>, y: &[T]) -> Result<Vec<T>> {
    least_squares(c, y)
}

/// `(CᵀC + αI)⁻¹ Cᵀy`.
pub fn solve_ridge<T: Real>(c: &DenseMatrix<T>, y: &[T], alpha: f64) -> Result<Vec<T>> {
    check_alpha(alpha)?;
    let rhs = c.t_mul_vec(y)?;
    let d = c.cols();
    let mut data = c.gram().into_vec();
    for i in 0..d {
        data[i * d + i] += T::cast(alpha);
    }
    let g = DenseMatrix::from_row_major(d, d, data)?;
    match cholesky(&g) {
        Ok(l) => cholesky_solve(&l, &rhs),
        Err(Error::NotPositiveDefinite { .. }) => solve_square(&g, &rhs),
        Err(e) => Err(e),
    }
}

pub fn solve_lasso<T: Real>(c: &DenseMatrix<T>, y: &[T], alpha: f64) -> Result<Vec<T>> {
    check_alpha(alpha)?;
    let (g, cy) = normalized_moments(c, y)?;
    coordinate_descent(&g, &cy, alpha, 0.0, &CdOptions::for_precision::<T>())
}

pub fn solve_elastic<T: Real>(c: &DenseMatrix<T>, y: &[T], alpha: f64, rho: f64) -> Result<Vec<T>> {
    check_alpha(alpha)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho must lie in [0, 1], got {rho}")));
    }
    let (g, cy) = normalized_moments(c, y)?;
    coordinate_descent(
        &g,
        &cy,
        (1.0 - rho) / 2.0 * alpha,
        rho * alpha,
        &CdOptions::for_precision::<T>(),
    )
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must be finite and >= 0, got {alpha}")))
    }
}

/// `(CᵀC / r, Cᵀy / r)`.
fn normalized_moments<T: Real>(c: &DenseMatrix<T>, y: &[T]) -> Result<(DenseMatrix<T>, Vec<T>)> {
    let cy = c.t_mul_vec(y)?;
    let r = T::cast(c.rows() as f64);
    Ok((c.gram().scaled(T::one() / r), cy.into_iter().map(|v| v / r).collect()))
}

/// Stopping rule for [`coordinate_descent`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdOptions {
    /// Stop once the largest coordinate change of a sweep is at most
    /// `tol · max_j |x_j|`.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl CdOptions {
    /// `1e-9`, loosened to a few ulps in `f32`, and `10⁵` sweeps.
    pub fn for_precision<T: Real>() -> Self {
        Self {
            tol: 1e-9f64.max(4.0 * T::EPS.as_f64()),
            max_sweeps: 100_000,
        }
    }
}

/// Cyclic coordinate descent on
/// `½xᵀGx − cᵀx + l2‖x‖² + l1‖x‖₁`, sweeping coordinates in index order
/// from `x = 0`.
pub fn coordinate_descent<T: Real>(
    g: &DenseMatrix<T>,
    c: &[T],
    l1: f64,
    l2: f64,
    opts: &CdOptions,
) -> Result<Vec<T>> {
    let d = g.cols();
    if g.rows() != d || c.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: c.len(),
        });
    }
    let (l1, two_l2) = (T::cast(l1), T::cast(2.0 * l2));
    let tol = T::cast(opts.tol);
    let mut x = vec![T::zero(); d];
    // q = Gx
    let mut q = vec![T::zero(); d];
    let mut last_change = T::zero();
    for _ in 0..opts.max_sweeps {
        let mut max_change = T::zero();
        let mut x_max = T::zero();
        for j in 0..d {
            let gjj = g.get(j, j);
            let denom = gjj + two_l2;
            let old = x[j];
            let new = if denom > T::zero() {
                soft_threshold(c[j] - q[j] + gjj * old, l1) / denom
            } else {
                T::zero()
            };
            let delta = new - old;
            if delta != T::zero() {
                x[j] = new;
                for (qi, &gij) in q.iter_mut().zip(g.row(j)) {
                    *qi += gij * delta;
                }
            }
            max_change = max_change.max(delta.abs());
            x_max = x_max.max(new.abs());
        }
        last_change = max_change;
        if max_change <= tol * x_max {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_sweeps,
        last_change: last_change.as_f64(),
    })
}

#[inline]
fn soft_threshold<T: Real>(v: T, t: T) -> T {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        T::zero()
    }
}
