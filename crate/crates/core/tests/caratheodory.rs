mod common;

use caratheodory::caratheodory::{caratheodory_slow, fast_caratheodory, CaratheodorySet};
use caratheodory::sparse::{block_partition, sparse_caratheodory};
use caratheodory::weighted::{PartitionSpec, WeightedSet};
use caratheodory::Error;
use common::{max_abs_diff, norm, rng, weighted_set};
use proptest::prelude::*;

fn assert_caratheodory(input: &WeightedSet<f64>, out: &CaratheodorySet<f64>) {
    let d = input.dim();
    assert!(out.len() <= d + 1, "{} points for d = {d}", out.len());
    assert!((out.weight_sum() - 1.0).abs() <= 1e-10);
    assert!(out.weights.iter().all(|&w| w > 0.0));
    assert!(out.indices.windows(2).all(|w| w[0] < w[1]));
    assert!(out.indices.iter().all(|&i| i < input.len()));
    let want = input.weighted_sum();
    let got = out.weighted_sum(input.points());
    assert!(max_abs_diff(&want, &got) <= 1e-10 * (1.0 + norm(&want)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn slow_output_is_a_caratheodory_set(seed in any::<u64>(), n in 1usize..40, d in 1usize..6) {
        let input = weighted_set(&mut rng(seed), n, d);
        assert_caratheodory(&input, &caratheodory_slow(&input).unwrap());
    }

    #[test]
    fn fast_output_is_a_caratheodory_set(
        seed in any::<u64>(),
        n in 1usize..2000,
        d in 1usize..9,
        extra in 0usize..20,
    ) {
        let input = weighted_set(&mut rng(seed), n, d);
        let out = fast_caratheodory(&input, d + 2 + extra).unwrap();
        assert_caratheodory(&input, &out);
    }

    #[test]
    fn fast_is_deterministic(seed in any::<u64>(), n in 1usize..500, d in 1usize..5) {
        let input = weighted_set(&mut rng(seed), n, d);
        prop_assert_eq!(fast_caratheodory(&input, d + 3).unwrap(), fast_caratheodory(&input, d + 3).unwrap());
    }

    #[test]
    fn sparse_output_keeps_the_mean_per_block(
        seed in any::<u64>(),
        n in 1usize..600,
        d in 1usize..10,
        k2_pick in 0usize..10,
    ) {
        let input = weighted_set(&mut rng(seed), n, d);
        let k2 = 1 + k2_pick % d;
        let width = d.div_ceil(k2);
        let k1 = (width + 2).max(n.min(width + 5));
        let out = sparse_caratheodory(&input, k1, k2).unwrap();
        prop_assert!((out.weight_sum() - k2 as f64).abs() <= 1e-10 * k2 as f64);
        let blocks = block_partition(d, k2).unwrap();
        for (b, range) in blocks.iter().enumerate() {
            let count = out.entries.iter().filter(|e| e.block == b).count();
            prop_assert!(count <= range.len() + 1);
        }
        let want = input.weighted_sum();
        let got = out.weighted_sum(input.points());
        prop_assert!(max_abs_diff(&want, &got) <= 1e-10 * (1.0 + norm(&want)));
    }

    #[test]
    fn partitions_are_balanced(n in 1usize..10_000, k in 1usize..300) {
        let p = PartitionSpec::contiguous(n, k).unwrap();
        prop_assert_eq!(p.cluster_count(), k.min(n));
        let sizes: Vec<usize> = p.clusters().map(|r| r.len()).collect();
        prop_assert_eq!(sizes.iter().sum::<usize>(), n);
        let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
        prop_assert!(hi - lo <= 1);
        prop_assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn unnormalized_weights_are_rejected() {
    let input = WeightedSet::new(
        caratheodory::DenseMatrix::<f64>::from_rows(&[[0.0], [1.0]]).unwrap(),
        vec![0.5, 0.6],
    )
    .unwrap();
    assert!(matches!(caratheodory_slow(&input), Err(Error::NotNormalized { .. })));
    assert!(matches!(fast_caratheodory(&input, 3), Err(Error::NotNormalized { .. })));
}

#[test]
fn f32_sets_stay_close() {
    let input = weighted_set(&mut rng(5), 3000, 6);
    let points = input.points().cast::<f32>();
    let weights: Vec<f32> = input.weights().iter().map(|&w| w as f32).collect();
    let total: f32 = weights.iter().sum();
    let input32 = WeightedSet::new(points, weights.iter().map(|w| w / total).collect()).unwrap();
    let out = fast_caratheodory(&input32, 20).unwrap();
    assert!(out.len() <= 7);
    let want = input32.weighted_sum();
    let got = out.weighted_sum(input32.points());
    for (w, g) in want.iter().zip(&got) {
        assert!((w - g).abs() <= 1e-3 * (1.0 + w.abs()));
    }
}
