//! Coresets for subspace energy and affine PCA.
//!
//! For `Y ∈ R^{d×(d−j)}` with orthonormal columns, `‖AY‖²_F = tr(YᵀAᵀAY)`,
//! so any `S` with `SᵀS = AᵀA` preserves it. Appending a ones column also
//! preserves `Σ a_i` and `n`, which is enough for the translated cost
//! `Σ ‖(a_i − ℓ)Y‖²`.

use crate::covariance::{caratheodory_matrix, CovarianceCoreset};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::real::Real;

/// An affine subspace query: orthonormal `Y` (`d × (d−j)`) and translation
/// `ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceQuery<T: Real> {
    y: DenseMatrix<T>,
    ell: Vec<T>,
}

impl<T: Real> SubspaceQuery<T> {
    /// Checks `‖YᵀY − I‖_F ≤ max(1e-10, 10ε)` and `1 ≤ j ≤ d − 1`.
    pub fn new(y: DenseMatrix<T>, ell: Vec<T>, j: usize) -> Result<Self> {
        let d = y.rows();
        if j == 0 || j >= d {
            return Err(Error::InvalidParameter(format!("need 1 <= j <= d - 1, got j = {j}, d = {d}")));
        }
        if y.cols() != d - j {
            return Err(Error::DimensionMismatch {
                expected: d - j,
                found: y.cols(),
            });
        }
        if ell.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: ell.len(),
            });
        }
        let g = y.cast::<f64>().gram();
        let mut off = 0.0;
        for r in 0..g.rows() {
            for c in 0..g.cols() {
                let e = g.get(r, c) - if r == c { 1.0 } else { 0.0 };
                off += e * e;
            }
        }
        let tol = 1e-10f64.max(10.0 * T::EPS.as_f64());
        if off.sqrt() > tol {
            return Err(Error::InvalidParameter(format!(
                "Y is not orthonormal: |YᵀY - I|_F = {:e}",
                off.sqrt()
            )));
        }
        Ok(Self { y, ell })
    }

    /// Query through the origin.
    pub fn linear(y: DenseMatrix<T>, j: usize) -> Result<Self> {
        let d = y.rows();
        Self::new(y, vec![T::zero(); d], j)
    }

    pub fn basis(&self) -> &DenseMatrix<T> {
        &self.y
    }

    pub fn translation(&self) -> &[T] {
        &self.ell
    }

    pub fn dim(&self) -> usize {
        self.y.rows()
    }

    /// `w · ‖(p − ℓ)Y‖²` in `f64`.
    fn point_cost(&self, p: &[T], w: f64) -> f64 {
        let mut total = 0.0;
        for c in 0..self.y.cols() {
            let mut s = 0.0;
            for (r, (&pr, &lr)) in p.iter().zip(&self.ell).enumerate() {
                s += (pr.as_f64() - lr.as_f64()) * self.y.get(r, c).as_f64();
            }
            total += s * s;
        }
        w * total
    }

    /// `Σ ‖(a_i − ℓ)Y‖²` over the rows of `a`.
    pub fn cost(&self, a: &DenseMatrix<T>) -> Result<f64> {
        self.check_dim(a.cols())?;
        Ok(a.row_iter().map(|r| self.point_cost(r, 1.0)).sum())
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: d,
            })
        }
    }
}

/// `S` with `SᵀS = AᵀA`, so `‖AY‖²_F = ‖SY‖²_F` for every orthonormal `Y`.
pub fn svd_coreset<T: Real>(a: &DenseMatrix<T>, k: usize) -> Result<CovarianceCoreset<T>> {
    caratheodory_matrix(a, k)
}

/// At most `(d+1)² + 1` weighted rows with
/// `Σ ‖(a_i − ℓ)Y‖² = Σ w_i ‖(c_i − ℓ)Y‖²` for every query.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaCoreset<T: Real> {
    pub rows: DenseMatrix<T>,
    pub weights: Vec<T>,
}

impl<T: Real> PcaCoreset<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn cost(&self, q: &SubspaceQuery<T>) -> Result<f64> {
        q.check_dim(self.rows.cols())?;
        Ok(self
            .rows
            .row_iter()
            .zip(&self.weights)
            .map(|(r, w)| q.point_cost(r, w.as_f64()))
            .sum())
    }
}

/// Attempts before giving up on a well-conditioned ones column.
const MAX_ATTEMPTS: usize = 8;

/// Coreset of `[A | 1]`; each row `(s_i | z_i)` becomes `c_i = s_i / z_i`
/// with weight `z_i²`. Needs `k ≥ (d+1)² + 2`.
///
/// If some `z_i` falls below `1e-12 · max z` the construction is repeated
/// with `k + d + 1` clusters.
pub fn pca_coreset<T: Real>(a: &DenseMatrix<T>, k: usize) -> Result<PcaCoreset<T>> {
    let d = a.cols();
    let min = (d + 1) * (d + 1) + 2;
    if k < min {
        return Err(Error::InvalidK { k, min });
    }
    let ones = vec![T::one(); a.rows()];
    let augmented = a.append_column(&ones)?;
    let mut k = k;
    for _ in 0..MAX_ATTEMPTS {
        let s = caratheodory_matrix(&augmented, k)?.matrix;
        let (rows, z) = s.split_last_column()?;
        let z_max = z.iter().fold(T::zero(), |m, &v| m.max(v));
        if z.iter().all(|&v| v > T::cast(1e-12) * z_max) {
            let mut data = Vec::with_capacity(rows.rows() * d);
            for (r, &zi) in rows.row_iter().zip(&z) {
                data.extend(r.iter().map(|&v| v / zi));
            }
            return Ok(PcaCoreset {
                rows: DenseMatrix::from_row_major(rows.rows(), d, data)?,
                weights: z.iter().map(|&v| v * v).collect(),
            });
        }
        k += d + 1;
    }
    Err(Error::InvalidParameter(format!(
        "no well-conditioned coreset after {MAX_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DenseMatrix<f64> {
        DenseMatrix::from_fn(60, 3, |i, j| (((i + 2) * (j + 5) * 29) % 97) as f64 / 7.0 - 6.0).unwrap()
    }

    #[test]
    fn query_validation() {
        let y = DenseMatrix::<f64>::from_rows(&[[1.0], [0.0], [0.0]]).unwrap();
        assert!(SubspaceQuery::linear(y.clone(), 2).is_ok());
        assert!(SubspaceQuery::linear(y.clone(), 1).is_err());
        assert!(SubspaceQuery::linear(y.scaled(2.0), 2).is_err());
        assert!(SubspaceQuery::new(y, vec![0.0; 2], 2).is_err());
    }

    #[test]
    fn unit_direction_energy_is_preserved() {
        let a = sample();
        let s = svd_coreset(&a, 11).unwrap().matrix;
        let y = DenseMatrix::from_rows(&[[0.6], [0.0], [0.8]]).unwrap();
        let q = SubspaceQuery::linear(y, 2).unwrap();
        let (ca, cs) = (q.cost(&a).unwrap(), q.cost(&s).unwrap());
        assert!((ca - cs).abs() <= 1e-9 * ca);
    }

    #[test]
    fn translated_cost_is_preserved() {
        let a = sample();
        let c = pca_coreset(&a, 18).unwrap();
        assert!(c.len() <= 17);
        let y = DenseMatrix::from_rows(&[[0.0, 1.0], [0.6, 0.0], [0.8, 0.0]]).unwrap();
        let q = SubspaceQuery::new(y, vec![3.0, -12.0, 25.0], 1).unwrap();
        let (ca, cc) = (q.cost(&a).unwrap(), c.cost(&q).unwrap());
        assert!((ca - cc).abs() <= 1e-9 * ca, "{ca} vs {cc}");
    }

    #[test]
    fn zero_input_has_zero_energy() {
        let a = DenseMatrix::<f64>::zeros(5, 2).unwrap();
        let s = svd_coreset(&a, 6).unwrap().matrix;
        let q = SubspaceQuery::linear(DenseMatrix::from_rows(&[[1.0], [0.0]]).unwrap(), 1).unwrap();
        assert_eq!(q.cost(&s).unwrap(), 0.0);
    }

    #[test]
    fn small_k_is_rejected() {
        assert_eq!(pca_coreset(&sample(), 17), Err(Error::InvalidK { k: 17, min: 18 }));
    }
}
