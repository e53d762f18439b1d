//! Dense linear-algebra kernels shared by the coreset constructions and the
//! solvers: nullspace vectors, thin SVD, Cholesky and least squares.
//!
//! The SVD and QR factorizations are delegated to `nalgebra`; everything is
//! generic over [`Real`] so single precision runs stay single precision.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::real::Real;

/// `M = U · diag(singular_values) · Vᵀ` with singular values nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinSvd<T: Real> {
    pub u: DenseMatrix<T>,
    pub singular_values: Vec<T>,
    pub v: DenseMatrix<T>,
}

impl<T: Real> ThinSvd<T> {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let r = self.rank();
        let scaled = DenseMatrix::from_fn(self.u.rows(), r, |i, j| {
            self.u.get(i, j) * self.singular_values[j]
        })
        .expect("U has at least one row and column");
        scaled
            .matmul(&self.v.transpose())
            .expect("inner dimensions agree")
    }
}

/// `(U, singular values, V)` in nonincreasing order; `U` only when asked for.
type SortedSvd<T> = (Option<DMatrix<T>>, Vec<T>, DMatrix<T>);

fn svd_sorted<T: Real>(m: DMatrix<T>, want_u: bool) -> Result<SortedSvd<T>> {
    let svd = SVD::try_new(m, want_u, true, T::default_epsilon(), 0).ok_or(Error::ReturnsDegenerate)?;
    let sv: Vec<T> = svd.singular_values.iter().copied().collect();
    let v_t = svd.v_t.ok_or(Error::ReturnsDegenerate)?;
    let u = svd.u;
    // Stable descending order so equal values keep their original order.
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap_or(std::cmp::Ordering::Equal));
    let sorted_sv = order.iter().map(|&i| sv[i]).collect();
    let v = DMatrix::from_fn(v_t.ncols(), order.len(), |i, j| v_t[(order[j], i)]);
    let u = u.map(|u| DMatrix::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]));
    Ok((u, sorted_sv, v))
}

/// Thin singular value decomposition.
pub fn thin_svd<T: Real>(m: &DenseMatrix<T>) -> Result<ThinSvd<T>> {
    let (u, singular_values, v) = svd_sorted(m.to_nalgebra(), true)?;
    let u = u.ok_or(Error::ReturnsDegenerate)?;
    Ok(ThinSvd {
        u: DenseMatrix::from_nalgebra(&u)?,
        singular_values,
        v: DenseMatrix::from_nalgebra(&v)?,
    })
}

/// Eigenvalues in nonincreasing order and the matching orthonormal
/// eigenvectors (as columns) of a symmetric matrix.
///
/// Preferred over [`thin_svd`] for symmetric input: the singular vectors do
/// not carry the eigenvalue signs, and the SVD iteration can lose accuracy
/// on nearly repeated singular values.
pub fn symmetric_eigen<T: Real>(m: &DenseMatrix<T>) -> Result<(Vec<T>, DenseMatrix<T>)> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let eig = SymmetricEigen::try_new(m.to_nalgebra(), T::default_epsilon(), 0).ok_or(Error::ReturnsDegenerate)?;
    let values: Vec<T> = eig.eigenvalues.iter().copied().collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal));
    let vectors = DenseMatrix::from_fn(m.rows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])])?;
    Ok((order.iter().map(|&i| values[i]).collect(), vectors))
}

/// A nonzero unit vector `v` with `Mv ≈ 0` for a matrix with more columns
/// than rows.
///
/// The matrix is padded with zero rows to a square one and the right
/// singular vector of its smallest singular value is returned (lowest index
/// among exact ties in the nonincreasing order).
pub fn nullspace_vector<T: Real>(m: &DenseMatrix<T>) -> Result<Vec<T>> {
    let (rows, cols) = (m.rows(), m.cols());
    if cols <= rows {
        return Err(Error::DimensionMismatch {
            expected: rows + 1,
            found: cols,
        });
    }
    let padded = DMatrix::from_fn(cols, cols, |i, j| if i < rows { m.get(i, j) } else { T::zero() });
    let (_, sv, v) = svd_sorted(padded, false)?;
    let min = sv.iter().copied().fold(sv[0], |a, b| if b < a { b } else { a });
    let pick = sv.iter().position(|&s| s == min).ok_or(Error::ReturnsDegenerate)?;
    let vec: Vec<T> = v.column(pick).iter().copied().collect();
    let norm = vec.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
    if norm == T::zero() || !norm.is_finite_value() {
        return Err(Error::ReturnsDegenerate);
    }
    Ok(vec.into_iter().map(|x| x / norm).collect())
}

/// Lower-triangular `L` with `L·Lᵀ = M`.
///
/// A pivot that is not above `n·ε` times its diagonal entry is reported as
/// `NotPositiveDefinite`.
///
/// `M` must be symmetric up to `1e-9` relative to its largest entry; only its
/// lower triangle is read.
pub fn cholesky<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.cols(),
        });
    }
    let scale = m.as_slice().iter().fold(0.0f64, |a, &v| a.max(v.as_f64().abs()));
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            asym = asym.max((m.get(i, j).as_f64() - m.get(j, i).as_f64()).abs());
        }
    }
    if scale > 0.0 && asym > 1e-9 * scale {
        return Err(Error::NotSymmetric {
            asymmetry: asym / scale,
        });
    }

    // Pivots that lose all but rounding noise of the diagonal count as zero.
    let tiny = T::cast(n as f64) * T::EPS;
    let mut l = vec![T::zero(); n * n];
    for j in 0..n {
        let mut diag = m.get(j, j);
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        if !(diag > tiny * m.get(j, j)) || !diag.is_finite_value() {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let ljj = diag.sqrt();
        l[j * n + j] = ljj;
        for i in j + 1..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / ljj;
        }
    }
    DenseMatrix::from_row_major(n, n, l)
}

/// Solves `L·Lᵀ x = rhs` given the factor from [`cholesky`].
pub fn cholesky_solve<T: Real>(l: &DenseMatrix<T>, rhs: &[T]) -> Result<Vec<T>> {
    let n = l.rows();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    let mut z = rhs.to_vec();
    for i in 0..n {
        let mut s = z[i];
        for k in 0..i {
            s -= l.get(i, k) * z[k];
        }
        z[i] = s / l.get(i, i);
    }
    for i in (0..n).rev() {
        let mut s = z[i];
        for k in i + 1..n {
            s -= l.get(k, i) * z[k];
        }
        z[i] = s / l.get(i, i);
    }
    Ok(z)
}

/// Minimizer of `‖Cx − y‖₂` via Householder QR of `C`.
///
/// Fails with `RankDeficient` when the condition number of `C` (from the
/// singular values of `R`) exceeds the precision's limit.
pub fn least_squares<T: Real>(c: &DenseMatrix<T>, y: &[T]) -> Result<Vec<T>> {
    let (n, d) = (c.rows(), c.cols());
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    if n < d {
        return Err(Error::RankDeficient {
            condition: f64::INFINITY,
        });
    }
    let qr = c.to_nalgebra().qr();
    let mut rhs = DVector::from_column_slice(y);
    qr.q_tr_mul(&mut rhs);
    let r = qr.r();
    let condition = condition_number(&r);
    if !(condition <= T::max_condition()) {
        return Err(Error::RankDeficient { condition });
    }
    let top = rhs.rows(0, d).into_owned();
    let x = r.solve_upper_triangular(&top).ok_or(Error::Singular)?;
    Ok(x.iter().copied().collect())
}

fn condition_number<T: Real>(r: &DMatrix<T>) -> f64 {
    match svd_sorted(r.clone(), false) {
        Ok((_, sv, _)) => {
            let max = sv.first().map_or(0.0, |s| s.as_f64());
            let min = sv.last().map_or(0.0, |s| s.as_f64());
            if min == 0.0 {
                f64::INFINITY
            } else {
                max / min
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Solves a square system with partial-pivoting LU.
pub fn solve_square<T: Real>(m: &DenseMatrix<T>, rhs: &[T]) -> Result<Vec<T>> {
    if m.rows() != m.cols() || rhs.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: rhs.len(),
        });
    }
    let lu = m.to_nalgebra().lu();
    let x = lu
        .solve(&DVector::from_column_slice(rhs))
        .ok_or(Error::Singular)?;
    if x.iter().any(|v| !v.is_finite_value()) {
        return Err(Error::Singular);
    }
    Ok(x.iter().copied().collect())
}

/// Basis of `{v : Mv = 0}` for `M = Xᵀ`, where `X` is `n × d` with `n > d`
/// and given column-major (`cols[j]` is column `j` of `X`).
///
/// Householder QR of `X`; the trailing `n − d` columns of the full `Q` are
/// orthogonal to the column space of `X` whatever its rank.
pub(crate) fn kernel_basis_of_transpose<T: Real>(cols: &mut [Vec<T>], n: usize) -> Vec<Vec<T>> {
    let d = cols.len();
    debug_assert!(n > d);
    let mut reflectors: Vec<(Vec<T>, T)> = Vec::with_capacity(d);
    for j in 0..d {
        let x = &cols[j][j..];
        let norm = x.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
        if norm == T::zero() {
            reflectors.push((Vec::new(), T::zero()));
            continue;
        }
        let alpha = if x[0] > T::zero() { -norm } else { norm };
        let mut h: Vec<T> = x.to_vec();
        h[0] -= alpha;
        let hh = h.iter().fold(T::zero(), |a, &v| a + v * v);
        if hh == T::zero() {
            reflectors.push((Vec::new(), T::zero()));
            continue;
        }
        let beta = T::cast(2.0) / hh;
        for col in cols.iter_mut().skip(j + 1) {
            let tail = &mut col[j..];
            let s = h.iter().zip(tail.iter()).fold(T::zero(), |a, (&p, &q)| a + p * q) * beta;
            for (t, &p) in tail.iter_mut().zip(&h) {
                *t -= s * p;
            }
        }
        reflectors.push((h, beta));
    }

    (d..n)
        .map(|c| {
            let mut e = vec![T::zero(); n];
            e[c] = T::one();
            for (j, (h, beta)) in reflectors.iter().enumerate().rev() {
                if h.is_empty() {
                    continue;
                }
                let tail = &mut e[j..];
                let s = h.iter().zip(tail.iter()).fold(T::zero(), |a, (&p, &q)| a + p * q) * *beta;
                for (t, &p) in tail.iter_mut().zip(h) {
                    *t -= s * p;
                }
            }
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual_ratio(m: &DenseMatrix<f64>, v: &[f64]) -> f64 {
        let mv = m.mul_vec(v).unwrap();
        let r = mv.iter().map(|x| x * x).sum::<f64>().sqrt();
        let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        r / (m.frobenius_norm() * vn)
    }

    #[test]
    fn nullspace_of_single_equation() {
        let m = DenseMatrix::<f64>::from_rows(&[[1.0, 1.0]]).unwrap();
        let v = nullspace_vector(&m).unwrap();
        assert!((v[0] + v[1]).abs() < 1e-14);
        assert!((v[0].abs() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn nullspace_of_coordinate_rows() {
        let m = DenseMatrix::<f64>::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let v = nullspace_vector(&m).unwrap();
        assert!(v[0].abs() < 1e-14 && v[1].abs() < 1e-14);
        assert!((v[2].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nullspace_of_random_wide_matrix() {
        let m = DenseMatrix::from_rows(&[
            [0.3, -1.2, 2.5, 0.7, 1.1],
            [1.9, 0.4, -0.6, 2.2, -0.8],
            [-0.5, 1.3, 0.9, -1.7, 0.2],
        ])
        .unwrap();
        let v = nullspace_vector(&m).unwrap();
        assert!(residual_ratio(&m, &v) <= 1e-10);
    }

    #[test]
    fn nullspace_rejects_tall_input() {
        let m = DenseMatrix::<f64>::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert!(matches!(nullspace_vector(&m), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn svd_of_identity() {
        let id = DenseMatrix::<f64>::identity(3).unwrap();
        let svd = thin_svd(&id).unwrap();
        assert!(svd.singular_values.iter().all(|&s| (s - 1.0).abs() < 1e-14));
    }

    #[test]
    fn svd_of_rank_one() {
        let u = [1.0, 2.0, -2.0];
        let v = [3.0, 4.0];
        let m = DenseMatrix::<f64>::from_fn(3, 2, |i, j| u[i] * v[j]).unwrap();
        let svd = thin_svd(&m).unwrap();
        assert!((svd.singular_values[0] - 15.0).abs() < 1e-12);
        assert!(svd.singular_values[1].abs() < 1e-12);
    }

    #[test]
    fn cholesky_of_scaled_identity() {
        let m = DenseMatrix::<f64>::from_rows(&[[4.0, 0.0], [0.0, 4.0]]).unwrap();
        let l = cholesky(&m).unwrap();
        assert_eq!(l.as_slice(), &[2.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = DenseMatrix::<f64>::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert_eq!(cholesky(&m), Err(Error::NotPositiveDefinite { pivot: 1 }));
    }

    #[test]
    fn cholesky_rejects_asymmetric() {
        let m = DenseMatrix::<f64>::from_rows(&[[4.0, 1.0], [0.0, 4.0]]).unwrap();
        assert!(matches!(cholesky(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn least_squares_identity() {
        let c = DenseMatrix::<f64>::identity(2).unwrap();
        assert_eq!(least_squares(&c, &[1.0, 2.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn least_squares_reports_rank_deficiency() {
        let c = DenseMatrix::<f64>::from_rows(&[[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]]).unwrap();
        assert!(matches!(
            least_squares(&c, &[1.0, 2.0, 3.0]),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn kernel_basis_spans_complement() {
        // X is 5 × 2; kernel of Xᵀ has dimension 3.
        let x = [[1.0, 0.5], [2.0, -1.0], [0.0, 3.0], [-1.0, 1.0], [4.0, 2.0]];
        let mut cols: Vec<Vec<f64>> = (0..2).map(|j| x.iter().map(|r| r[j]).collect()).collect();
        let basis = kernel_basis_of_transpose(&mut cols, 5);
        assert_eq!(basis.len(), 3);
        for v in &basis {
            for j in 0..2 {
                let s: f64 = x.iter().zip(v).map(|(r, vi)| r[j] * vi).sum();
                assert!(s.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn symmetric_eigen_is_sorted_and_reconstructs() {
        let m = DenseMatrix::<f64>::from_rows(&[[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, -1.0]]).unwrap();
        let (values, vectors) = symmetric_eigen(&m).unwrap();
        let want = [3.0, 1.0, -1.0];
        for (v, w) in values.iter().zip(want) {
            assert!((v - w).abs() < 1e-12);
        }
        let scaled = DenseMatrix::from_fn(3, 3, |i, j| vectors.get(i, j) * values[j]).unwrap();
        let back = scaled.matmul(&vectors.transpose()).unwrap();
        assert!(back.sub(&m).unwrap().frobenius_norm() < 1e-12);
    }
}
