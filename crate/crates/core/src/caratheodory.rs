//! Caratheodory sets: at most `d + 1` input points, reweighted so that the
//! weighted mean and the total weight of the input are kept exactly.
//!
//! [`caratheodory_slow`] is the classical elimination: find an affine
//! dependency `Σ v_i p_i = 0, Σ v_i = 0`, move the weights along it until one
//! of them hits zero, repeat. [`fast_caratheodory`] wraps it: split the
//! points into `k` clusters, run the elimination on the `k` cluster means,
//! keep only the clusters that survived, and recurse.

use crate::error::{Error, Result};
use crate::linalg::kernel_basis_of_transpose;
use crate::real::Real;
use crate::weighted::{PartitionSpec, PointSource, WeightedSet};

/// Weighted subset of an input point set.
#[derive(Debug, Clone, PartialEq)]
pub struct CaratheodorySet<T: Real> {
    /// Positions in the input, ascending.
    pub indices: Vec<usize>,
    /// Strictly positive, aligned with `indices`.
    pub weights: Vec<T>,
    pub source_dim: usize,
    pub source_size: usize,
}

impl<T: Real> CaratheodorySet<T> {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn weight_sum(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &w| a + w)
    }

    /// `Σ w_i p_i` over the selected points of `source`.
    pub fn weighted_sum<S: PointSource<T> + ?Sized>(&self, source: &S) -> Vec<T> {
        let mut out = vec![T::zero(); source.dim()];
        for (&i, &w) in self.indices.iter().zip(&self.weights) {
            source.accumulate(i, w, &mut out);
        }
        out
    }
}

/// Which slow construction the cluster count is tuned for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlowVariant {
    /// `O(n²d²)` elimination, the one implemented here.
    Quadratic,
    /// `O(nd³)` incremental update.
    Linear,
}

/// Running-time optimal cluster count for the fast construction, never below
/// `d + 2`.
pub fn default_cluster_count(d: usize, variant: SlowVariant) -> usize {
    let factor = match variant {
        SlowVariant::Quadratic => std::f64::consts::E.sqrt(),
        SlowVariant::Linear => std::f64::consts::E,
    };
    let k = (factor * d as f64).ceil() as usize;
    k.max(d + 2)
}

fn normalization_tolerance<T: Real>() -> f64 {
    1e-8f64.max(100.0 * T::EPS.as_f64())
}

fn check_weights<T: Real>(weights: &[T]) -> Result<()> {
    let mut sum = 0.0f64;
    for (index, &w) in weights.iter().enumerate() {
        if !w.is_finite_value() || w < T::zero() {
            return Err(Error::InvalidWeight {
                index,
                value: w.as_f64(),
            });
        }
        sum += w.as_f64();
    }
    if (sum - 1.0).abs() > normalization_tolerance::<T>() {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

/// Classical Caratheodory construction on an explicit weighted set.
///
/// Requires weights summing to one. Zero-weight points never appear in the
/// output.
pub fn caratheodory_slow<T: Real>(input: &WeightedSet<T>) -> Result<CaratheodorySet<T>> {
    if input.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_weights(input.weights())?;
    let d = input.dim();
    let (keep, weights): (Vec<usize>, Vec<T>) = input
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > T::zero())
        .map(|(i, &w)| (i, w))
        .unzip();
    let mut flat = Vec::with_capacity(keep.len() * d);
    for &i in &keep {
        flat.extend_from_slice(input.points().row(i));
    }
    let (sel, w) = eliminate(&flat, d, weights);
    Ok(CaratheodorySet {
        indices: sel.into_iter().map(|s| keep[s]).collect(),
        weights: w,
        source_dim: d,
        source_size: input.len(),
    })
}

/// Elimination core on `n` points stored row-major in `points` (dimension
/// `d`) with positive weights. Returns positions into the input and their new
/// weights.
pub(crate) fn eliminate<T: Real>(points: &[T], d: usize, mut u: Vec<T>) -> (Vec<usize>, Vec<T>) {
    let n = u.len();
    debug_assert_eq!(points.len(), n * d);
    if n <= d + 1 {
        return ((0..n).collect(), u);
    }
    let max_w = u.iter().fold(T::zero(), |a, &w| if w > a { w } else { a });
    let floor = T::weight_floor() * max_w;

    let mut active = vec![true; n];
    let mut count = n;
    let mut basis: Vec<Vec<T>> = Vec::new();

    while count > d + 1 {
        if basis.is_empty() {
            basis = affine_dependencies(points, d, &active);
            if basis.is_empty() {
                break;
            }
        }
        let mut z = basis.remove(0);

        // α = min { u_i / z_i : z_i > 0 }, lowest index on ties.
        let mut best: Option<(usize, T)> = None;
        for pass in 0..2 {
            for i in 0..n {
                if !active[i] || !(z[i] > T::zero()) {
                    continue;
                }
                let ratio = u[i] / z[i];
                if best.is_none_or(|(_, b)| ratio < b) {
                    best = Some((i, ratio));
                }
            }
            if best.is_some() || pass == 1 {
                break;
            }
            z.iter_mut().for_each(|v| *v = -*v);
        }
        let Some((star, alpha)) = best else {
            continue;
        };

        for i in 0..n {
            if active[i] {
                u[i] -= alpha * z[i];
            }
        }
        u[star] = T::zero();

        let pivot = z[star];
        for b in basis.iter_mut() {
            let c = b[star] / pivot;
            if c != T::zero() {
                for (bi, &zi) in b.iter_mut().zip(&z) {
                    *bi -= c * zi;
                }
            }
            b[star] = T::zero();
            rescale(b);
        }
        active[star] = false;
        count -= 1;

        // Weights that only survived the subtraction by rounding.
        for j in 0..n {
            if active[j] && u[j] <= floor {
                u[j] = T::zero();
                active[j] = false;
                count -= 1;
                drop_coordinate(&mut basis, j);
            }
        }
    }

    let sel: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
    let w = sel.iter().map(|&i| u[i]).collect();
    (sel, w)
}

/// Basis of `{z : Σ z_i p_i = 0, Σ z_i = 0}` restricted to active points,
/// built from `v` with `Σ_{i>1} v_i (p_i − p_1) = 0` and `z_1 = −Σ v_i`.
fn affine_dependencies<T: Real>(points: &[T], d: usize, active: &[bool]) -> Vec<Vec<T>> {
    let ids: Vec<usize> = (0..active.len()).filter(|&i| active[i]).collect();
    if ids.len() <= d + 1 {
        return Vec::new();
    }
    let first = &points[ids[0] * d..ids[0] * d + d];
    let rest = ids.len() - 1;
    let mut cols: Vec<Vec<T>> = (0..d)
        .map(|j| ids[1..].iter().map(|&i| points[i * d + j] - first[j]).collect())
        .collect();
    kernel_basis_of_transpose(&mut cols, rest)
        .into_iter()
        .map(|v| {
            let mut z = vec![T::zero(); active.len()];
            let mut s = T::zero();
            for (&i, &vi) in ids[1..].iter().zip(&v) {
                z[i] = vi;
                s += vi;
            }
            z[ids[0]] = -s;
            z
        })
        .collect()
}

/// Removes coordinate `j` from the span of `basis`, consuming one vector if
/// any has a nonzero entry there.
fn drop_coordinate<T: Real>(basis: &mut Vec<Vec<T>>, j: usize) {
    let pivot = basis
        .iter()
        .enumerate()
        .filter(|(_, b)| b[j] != T::zero())
        .max_by(|(_, a), (_, b)| a[j].abs().partial_cmp(&b[j].abs()).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, _)| i);
    let Some(p) = pivot else {
        return;
    };
    let z = basis.remove(p);
    for b in basis.iter_mut() {
        let c = b[j] / z[j];
        if c != T::zero() {
            for (bi, &zi) in b.iter_mut().zip(&z) {
                *bi -= c * zi;
            }
        }
        b[j] = T::zero();
        rescale(b);
    }
}

fn rescale<T: Real>(b: &mut [T]) {
    let m = b.iter().fold(T::zero(), |a, &v| if v.abs() > a { v.abs() } else { a });
    if m > T::zero() {
        b.iter_mut().for_each(|v| *v /= m);
    }
}

/// Fast Caratheodory set of an explicit weighted set; see
/// [`fast_caratheodory_source`].
pub fn fast_caratheodory<T: Real>(input: &WeightedSet<T>, k: usize) -> Result<CaratheodorySet<T>> {
    fast_caratheodory_source(input.points(), input.weights(), k)
}

/// Fast Caratheodory set of any [`PointSource`] with weights summing to one.
///
/// `k ≥ d + 2` clusters per level; clusters are contiguous and balanced, and
/// `k` is clamped to the number of surviving points.
pub fn fast_caratheodory_source<T: Real, S: PointSource<T> + ?Sized>(
    source: &S,
    weights: &[T],
    k: usize,
) -> Result<CaratheodorySet<T>> {
    let n = source.len();
    let d = source.dim();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: weights.len(),
        });
    }
    if k < d + 2 {
        return Err(Error::InvalidK { k, min: d + 2 });
    }
    check_weights(weights)?;

    let (mut idx, mut w): (Vec<usize>, Vec<T>) = weights
        .iter()
        .enumerate()
        .filter(|(_, &u)| u > T::zero())
        .map(|(i, &u)| (i, u))
        .unzip();

    let mut means = Vec::new();
    let mut mean = vec![T::zero(); d];
    while idx.len() > d + 1 {
        let part = PartitionSpec::contiguous(idx.len(), k)?;
        let clusters = part.cluster_count();
        means.clear();
        means.reserve(clusters * d);
        let mut cluster_weights = Vec::with_capacity(clusters);
        for range in part.clusters() {
            mean.iter_mut().for_each(|v| *v = T::zero());
            let mut total = T::zero();
            for pos in range {
                source.accumulate(idx[pos], w[pos], &mut mean);
                total += w[pos];
            }
            means.extend(mean.iter().map(|&v| v / total));
            cluster_weights.push(total);
        }

        let (chosen, chosen_w) = eliminate(&means, d, cluster_weights.clone());

        let mut next_idx = Vec::with_capacity(chosen.len() * part.max_cluster_size());
        let mut next_w = Vec::with_capacity(next_idx.capacity());
        for (&c, &wc) in chosen.iter().zip(&chosen_w) {
            let total = cluster_weights[c];
            for pos in part.cluster(c) {
                let nw = wc * w[pos] / total;
                if nw > T::zero() {
                    next_idx.push(idx[pos]);
                    next_w.push(nw);
                }
            }
        }
        debug_assert!(next_idx.len() < idx.len());
        idx = next_idx;
        w = next_w;
    }

    Ok(CaratheodorySet {
        indices: idx,
        weights: w,
        source_dim: d,
        source_size: n,
    })
}
