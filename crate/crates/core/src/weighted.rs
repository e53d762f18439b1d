use std::ops::Range;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::real::Real;

/// Something that can be treated as an ordered set of points in `R^dim`.
///
/// The Caratheodory routines only ever need weighted sums of points and
/// occasionally a single point, so sources such as flattened outer products
/// can be evaluated lazily instead of being materialized.
pub trait PointSource<T: Real> {
    fn len(&self) -> usize;

    fn dim(&self) -> usize;

    /// Coordinate `j` of point `i`.
    fn coord(&self, i: usize, j: usize) -> T;

    /// `out += scale * p_i`.
    fn accumulate(&self, i: usize, scale: T, out: &mut [T]) {
        self.accumulate_block(i, scale, 0, out);
    }

    /// `out += scale * p_i[start..start + out.len()]`.
    fn accumulate_block(&self, i: usize, scale: T, start: usize, out: &mut [T]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o += scale * self.coord(i, start + j);
        }
    }

    fn write_point(&self, i: usize, out: &mut [T]) {
        out.iter_mut().for_each(|v| *v = T::zero());
        self.accumulate(i, T::one(), out);
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: Real> PointSource<T> for DenseMatrix<T> {
    fn len(&self) -> usize {
        self.rows()
    }

    fn dim(&self) -> usize {
        self.cols()
    }

    #[inline]
    fn coord(&self, i: usize, j: usize) -> T {
        self.get(i, j)
    }

    #[inline]
    fn accumulate_block(&self, i: usize, scale: T, start: usize, out: &mut [T]) {
        for (o, &p) in out.iter_mut().zip(&self.row(i)[start..]) {
            *o += scale * p;
        }
    }

    fn write_point(&self, i: usize, out: &mut [T]) {
        out.copy_from_slice(self.row(i));
    }
}

/// Ordered points with one nonnegative weight each.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSet<T: Real> {
    points: DenseMatrix<T>,
    weights: Vec<T>,
}

impl<T: Real> WeightedSet<T> {
    pub fn new(points: DenseMatrix<T>, weights: Vec<T>) -> Result<Self> {
        if weights.len() != points.rows() {
            return Err(Error::DimensionMismatch {
                expected: points.rows(),
                found: weights.len(),
            });
        }
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite_value() || w < T::zero() {
                return Err(Error::InvalidWeight {
                    index,
                    value: w.as_f64(),
                });
            }
        }
        Ok(Self { points, weights })
    }

    /// Every point gets weight `1/n`.
    pub fn uniform(points: DenseMatrix<T>) -> Self {
        let n = points.rows();
        let w = T::one() / T::cast(n as f64);
        Self {
            weights: vec![w; n],
            points,
        }
    }

    /// Rescales the weights so they sum to one.
    pub fn normalized(mut self) -> Result<Self> {
        let total = self.weight_sum();
        if total <= T::zero() {
            return Err(Error::NotNormalized { sum: total.as_f64() });
        }
        self.weights.iter_mut().for_each(|w| *w /= total);
        Ok(self)
    }

    pub fn points(&self) -> &DenseMatrix<T> {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    pub fn weight_sum(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &w| a + w)
    }

    /// `Σ u_i p_i`.
    pub fn weighted_sum(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim()];
        for (i, &w) in self.weights.iter().enumerate() {
            self.points.accumulate(i, w, &mut out);
        }
        out
    }
}

/// Partition of `n` ordered points into `k` contiguous clusters whose sizes
/// differ by at most one, so none exceeds `⌈n/k⌉`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    len: usize,
    offsets: Vec<usize>,
}

impl PartitionSpec {
    /// `k` is clamped to `n`.
    pub fn contiguous(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if k == 0 {
            return Err(Error::InvalidK { k, min: 1 });
        }
        let k = k.min(n);
        let base = n / k;
        let extra = n % k;
        let mut offsets = Vec::with_capacity(k + 1);
        let mut at = 0;
        offsets.push(0);
        for c in 0..k {
            at += base + usize::from(c < extra);
            offsets.push(at);
        }
        Ok(Self { len: n, offsets })
    }

    pub fn cluster_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn cluster(&self, c: usize) -> Range<usize> {
        self.offsets[c]..self.offsets[c + 1]
    }

    pub fn clusters(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.offsets.windows(2).map(|w| w[0]..w[1])
    }

    /// Cluster holding position `i`.
    pub fn cluster_of(&self, i: usize) -> Option<usize> {
        if i >= self.len {
            return None;
        }
        Some(self.offsets.partition_point(|&o| o <= i) - 1)
    }

    pub fn max_cluster_size(&self) -> usize {
        self.clusters().map(|r| r.len()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_is_balanced_and_covering() {
        for n in 1..60 {
            for k in 1..70 {
                let p = PartitionSpec::contiguous(n, k).unwrap();
                assert_eq!(p.cluster_count(), k.min(n));
                assert!(p.max_cluster_size() <= n.div_ceil(k));
                assert!(p.clusters().all(|r| !r.is_empty()));
                let covered: Vec<usize> = p.clusters().flatten().collect();
                assert_eq!(covered, (0..n).collect::<Vec<_>>());
                for i in 0..n {
                    let c = p.cluster_of(i).unwrap();
                    assert!(p.cluster(c).contains(&i));
                }
            }
        }
    }

    #[test]
    fn rejects_negative_weights() {
        let pts = DenseMatrix::<f64>::from_rows(&[[0.0], [1.0]]).unwrap();
        assert!(matches!(
            WeightedSet::new(pts, vec![0.5, -0.5]),
            Err(Error::InvalidWeight { index: 1, .. })
        ));
    }

    #[test]
    fn normalization_sums_to_one() {
        let pts = DenseMatrix::<f64>::from_rows(&[[0.0], [1.0], [5.0]]).unwrap();
        let set = WeightedSet::new(pts, vec![1.0, 2.0, 7.0]).unwrap().normalized().unwrap();
        assert!((set.weight_sum() - 1.0).abs() <= 1e-12);
    }
}
