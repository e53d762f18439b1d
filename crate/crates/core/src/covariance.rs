//! Matrices `S` with `SᵀS = AᵀA`.
//!
//! Row `a_i` of `A` is mapped to the column-stacked outer product
//! `vec(a_i a_iᵀ) ∈ R^{d²}` with weight `1/n`; the mean of these points is
//! `AᵀA / n`. A Caratheodory set of them therefore rebuilds `AᵀA` from at most
//! `d² + 1` scaled rows, and the sparse variant rebuilds it from `O(d²)`
//! sparse pieces followed by one small SVD.

use crate::caratheodory::fast_caratheodory_source;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::matrix::DenseMatrix;
use crate::real::Real;
use crate::sparse::sparse_caratheodory_source;
use crate::weighted::PointSource;

/// Column-stacked outer products `vec(a_i a_iᵀ)` of the rows of a matrix,
/// evaluated on demand. Entry `c·d + r` of point `i` is `a_i[r] · a_i[c]`.
#[derive(Debug, Clone, Copy)]
pub struct OuterProducts<'a, T: Real> {
    rows: &'a [T],
    d: usize,
}

impl<'a, T: Real> OuterProducts<'a, T> {
    pub fn new(a: &'a DenseMatrix<T>) -> Self {
        Self {
            rows: a.as_slice(),
            d: a.cols(),
        }
    }

    #[inline]
    fn row(&self, i: usize) -> &[T] {
        &self.rows[i * self.d..(i + 1) * self.d]
    }
}

impl<T: Real> PointSource<T> for OuterProducts<'_, T> {
    fn len(&self) -> usize {
        self.rows.len() / self.d
    }

    fn dim(&self) -> usize {
        self.d * self.d
    }

    #[inline]
    fn coord(&self, i: usize, j: usize) -> T {
        let a = self.row(i);
        a[j % self.d] * a[j / self.d]
    }

    fn accumulate(&self, i: usize, scale: T, out: &mut [T]) {
        let a = self.row(i);
        for (col, &ac) in out.chunks_exact_mut(self.d).zip(a) {
            let s = scale * ac;
            for (o, &ar) in col.iter_mut().zip(a) {
                *o += s * ar;
            }
        }
    }

    fn accumulate_block(&self, i: usize, scale: T, start: usize, out: &mut [T]) {
        let a = self.row(i);
        let d = self.d;
        let (mut r, mut c) = (start % d, start / d);
        let mut s = scale * a[c];
        for o in out.iter_mut() {
            *o += s * a[r];
            r += 1;
            if r == d {
                r = 0;
                c += 1;
                if c < d {
                    s = scale * a[c];
                }
            }
        }
    }
}

/// Column stacking of a square matrix.
pub fn column_stack<T: Real>(m: &DenseMatrix<T>) -> Vec<T> {
    let d = m.rows();
    let mut v = Vec::with_capacity(d * m.cols());
    for c in 0..m.cols() {
        for r in 0..d {
            v.push(m.get(r, c));
        }
    }
    v
}

/// Inverse of [`column_stack`] for a `d × d` matrix.
pub fn column_unstack<T: Real>(v: &[T], d: usize) -> Result<DenseMatrix<T>> {
    if v.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: v.len(),
        });
    }
    DenseMatrix::from_fn(d, d, |r, c| v[c * d + r])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoresetKind {
    /// Scaled input rows, at most `d² + 1` of them.
    RowSubset,
    /// `√D Vᵀ` from the SVD of the rebuilt covariance; exactly `d` rows.
    Reconstructed,
}

/// Selected rows and their scale factors `√(n · w_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RowProvenance<T: Real> {
    pub indices: Vec<usize>,
    pub scales: Vec<T>,
}

/// Non-fatal numerical findings while rebuilding a covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoresetWarning {
    /// The rebuilt covariance was asymmetric by more than `1e-8` relative.
    Asymmetric { relative: f64 },
    /// A spectral component with a negative eigenvalue was clamped to zero.
    NegativeEigenvalue { value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceCoreset<T: Real> {
    pub matrix: DenseMatrix<T>,
    pub kind: CoresetKind,
    pub provenance: Option<RowProvenance<T>>,
    pub warnings: Vec<CoresetWarning>,
}

impl<T: Real> RowProvenance<T> {
    /// Rebuilds the scaled rows from the original matrix.
    pub fn rebuild(&self, a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        let d = a.cols();
        let mut data = Vec::with_capacity(self.indices.len() * d);
        for (&i, &s) in self.indices.iter().zip(&self.scales) {
            data.extend(a.row(i).iter().map(|&v| s * v));
        }
        DenseMatrix::from_row_major(self.indices.len(), d, data)
    }
}

/// `‖SᵀS − AᵀA‖_F / ‖AᵀA‖_F`, evaluated in `f64` (zero when both vanish).
pub fn relative_gram_error<T: Real, U: Real>(s: &DenseMatrix<T>, a: &DenseMatrix<U>) -> f64 {
    let gs = s.cast::<f64>().gram();
    let ga = a.cast::<f64>().gram();
    let num = gs.sub(&ga).map(|m| m.frobenius_norm()).unwrap_or(f64::INFINITY);
    let den = ga.frobenius_norm();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Scaled-row coreset: at most `d² + 1` rows `√(n·w_i)·a_i` with
/// `SᵀS = AᵀA`. Needs `k ≥ d² + 2`.
pub fn caratheodory_matrix<T: Real>(a: &DenseMatrix<T>, k: usize) -> Result<CovarianceCoreset<T>> {
    let n = a.rows();
    let dd = a.cols() * a.cols();
    if k < dd + 2 {
        return Err(Error::InvalidK { k, min: dd + 2 });
    }
    let source = OuterProducts::new(a);
    let weights = vec![T::one() / T::cast(n as f64); n];
    let set = fast_caratheodory_source(&source, &weights, k)?;
    let nt = T::cast(n as f64);
    let scales: Vec<T> = set.weights.iter().map(|&w| (nt * w).sqrt()).collect();
    let provenance = RowProvenance {
        indices: set.indices,
        scales,
    };
    Ok(CovarianceCoreset {
        matrix: provenance.rebuild(a)?,
        kind: CoresetKind::RowSubset,
        provenance: Some(provenance),
        warnings: Vec::new(),
    })
}

/// `d × d` coreset from a sparse Caratheodory set of the outer products.
///
/// Needs `1 ≤ k2 ≤ d²` and `⌈d²/k2⌉ + 2 ≤ k1 ≤ n`.
pub fn sparse_caratheodory_matrix<T: Real>(
    a: &DenseMatrix<T>,
    k1: usize,
    k2: usize,
) -> Result<CovarianceCoreset<T>> {
    let n = a.rows();
    let d = a.cols();
    let source = OuterProducts::new(a);
    let weights = vec![T::one() / T::cast(n as f64); n];
    let set = sparse_caratheodory_source(&source, &weights, k1, k2)?;

    let nt = T::cast(n as f64);
    let stacked: Vec<T> = set.weighted_sum(&source).into_iter().map(|v| nt * v).collect();
    let cov = column_unstack(&stacked, d)?;
    let (matrix, warnings) = sqrt_factor(&cov)?;
    Ok(CovarianceCoreset {
        matrix,
        kind: CoresetKind::Reconstructed,
        provenance: None,
        warnings,
    })
}

/// `S = √D Vᵀ` from the eigendecomposition of a covariance matrix (its SVD,
/// as the matrix is symmetric positive semidefinite), so `SᵀS` equals it.
///
/// The symmetrized matrix is decomposed and negative eigenvalues are clamped
/// to zero; only those beyond rounding level (`d·ε·max|λ|`) are reported.
pub(crate) fn sqrt_factor<T: Real>(cov: &DenseMatrix<T>) -> Result<(DenseMatrix<T>, Vec<CoresetWarning>)> {
    let d = cov.rows();
    let mut warnings = Vec::new();
    let scale = cov.as_slice().iter().fold(0.0f64, |m, &v| m.max(v.as_f64().abs()));
    let mut asym = 0.0f64;
    for i in 0..d {
        for j in 0..i {
            asym = asym.max((cov.get(i, j).as_f64() - cov.get(j, i).as_f64()).abs());
        }
    }
    if scale > 0.0 && asym > 1e-8 * scale {
        warnings.push(CoresetWarning::Asymmetric {
            relative: asym / scale,
        });
    }
    let half = T::cast(0.5);
    let sym = DenseMatrix::from_fn(d, d, |i, j| half * (cov.get(i, j) + cov.get(j, i)))?;
    let (values, vectors) = symmetric_eigen(&sym)?;
    let top = values.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let noise = T::cast(d as f64) * T::EPS * top;
    let mut data = vec![T::zero(); d * d];
    for (j, &lambda) in values.iter().enumerate() {
        let s = if lambda < T::zero() {
            if -lambda > noise {
                warnings.push(CoresetWarning::NegativeEigenvalue {
                    value: lambda.as_f64(),
                });
            }
            T::zero()
        } else {
            lambda.sqrt()
        };
        for i in 0..d {
            data[j * d + i] = s * vectors.get(i, j);
        }
    }
    Ok((DenseMatrix::from_row_major(d, d, data)?, warnings))
}
