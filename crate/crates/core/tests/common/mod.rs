#![allow(dead_code)]

use caratheodory::weighted::WeightedSet;
use caratheodory::{DenseMatrix, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn matrix<T: Real>(rng: &mut ChaCha8Rng, n: usize, d: usize, low: f64, high: f64) -> DenseMatrix<T> {
    DenseMatrix::from_fn(n, d, |_, _| T::cast(rng.random_range(low..high))).unwrap()
}

pub fn vector<T: Real>(rng: &mut ChaCha8Rng, n: usize, low: f64, high: f64) -> Vec<T> {
    (0..n).map(|_| T::cast(rng.random_range(low..high))).collect()
}

/// Points in `[-10, 10)^d` with positive weights normalized to one.
pub fn weighted_set(rng: &mut ChaCha8Rng, n: usize, d: usize) -> WeightedSet<f64> {
    let points = matrix(rng, n, d, -10.0, 10.0);
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    WeightedSet::new(points, raw.iter().map(|w| w / total).collect()).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
