//! Gram-accumulation baselines.
//!
//! Each method forms `B = Σ (a_i | b_i)ᵀ(a_i | b_i)` one row at a time, in
//! ascending row order and in the working precision `T`, with no compensated
//! summation. Running them on `f32` data reproduces the rounding behaviour
//! that the Caratheodory coresets avoid.

use crate::covariance::sqrt_factor;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, least_squares, solve_square};
use crate::matrix::DenseMatrix;
use crate::real::Real;

/// `(A | b)ᵀ(A | b)`.
pub fn accumulate_gram<T: Real>(a: &DenseMatrix<T>, b: &[T]) -> Result<DenseMatrix<T>> {
    Ok(a.append_column(b)?.gram())
}

/// Upper-triangular `S = Lᵀ` with `SᵀS = B`, or `NotPositiveDefinite`.
pub fn sketch_cholesky<T: Real>(a: &DenseMatrix<T>, b: &[T]) -> Result<DenseMatrix<T>> {
    Ok(cholesky(&accumulate_gram(a, b)?)?.transpose())
}

/// `S = √D Vᵀ` from the SVD of `B`; negative eigenvalues are clamped to zero.
pub fn sketch_svd<T: Real>(a: &DenseMatrix<T>, b: &[T]) -> Result<DenseMatrix<T>> {
    Ok(sqrt_factor(&accumulate_gram(a, b)?)?.0)
}

/// `(AᵀA)⁻¹Aᵀb` from the accumulated moments.
pub fn sketch_inverse<T: Real>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    solve_square(&a.gram(), &a.t_mul_vec(b)?)
}

/// Least-squares solution from a `(d+1) × (d+1)` sketch `S` of `(A | b)`.
pub fn solve_from_sketch<T: Real>(s: &DenseMatrix<T>) -> Result<Vec<T>> {
    if s.cols() < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: s.cols(),
        });
    }
    let (c, y) = s.split_last_column()?;
    least_squares(&c, &y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::relative_gram_error;

    #[test]
    fn cholesky_sketch_of_orthonormal_columns() {
        let a = DenseMatrix::<f64>::from_rows(&[[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]).unwrap();
        let b = [0.0, 0.0, 1.0];
        let s = sketch_cholesky(&a, &b).unwrap();
        let ab = a.append_column(&b).unwrap();
        assert!(relative_gram_error(&s, &ab) <= 1e-10);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(s.get(i, j), 0.0);
            }
        }
    }

    #[test]
    fn single_row_is_not_positive_definite() {
        let a = DenseMatrix::<f64>::from_rows(&[[0.3, 1.7]]).unwrap();
        assert!(matches!(
            sketch_cholesky(&a, &[2.9]),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn svd_sketch_of_identity() {
        let a = DenseMatrix::<f64>::identity(3).unwrap();
        let b = [0.0; 3];
        let s = sketch_svd(&a, &b).unwrap();
        let g = s.gram();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j && i < 3 { 1.0 } else { 0.0 };
                assert!((g.get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_of_identity_returns_targets() {
        let a = DenseMatrix::<f64>::identity(3).unwrap();
        assert_eq!(sketch_inverse(&a, &[1.0, -2.0, 3.0]).unwrap(), vec![1.0, -2.0, 3.0]);
    }

    #[test]
    fn inverse_of_rank_deficient_is_singular() {
        let a = DenseMatrix::<f64>::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert_eq!(sketch_inverse(&a, &[1.0, 1.0]), Err(Error::Singular));
    }

    #[test]
    fn sketch_solution_matches_regression() {
        let a = DenseMatrix::<f64>::from_rows(&[[1.0, 0.5], [2.0, -1.0], [0.0, 3.0], [1.5, 1.5]]).unwrap();
        let b = [1.0, 0.0, 2.0, -1.0];
        let x = least_squares(&a, &b).unwrap();
        let s = sketch_svd(&a, &b).unwrap();
        let xs = solve_from_sketch(&s).unwrap();
        for (u, v) in x.iter().zip(&xs) {
            assert!((u - v).abs() < 1e-10);
        }
    }
}
