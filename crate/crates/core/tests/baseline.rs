mod common;

use caratheodory::baseline::{accumulate_gram, sketch_cholesky, sketch_inverse, sketch_svd, solve_from_sketch};
use caratheodory::covariance::relative_gram_error;
use caratheodory::datasets::synthetic;
use caratheodory::lms::{lms_coreset, solve_linreg};

#[test]
fn baselines_agree_with_regression_in_f64() {
    let (a, b) = synthetic::<f64>(5000, 5, -1.0, 1.0, 41).unwrap();
    let x = solve_linreg(&a, &b).unwrap();
    let candidates = [
        solve_from_sketch(&sketch_cholesky(&a, &b).unwrap()).unwrap(),
        solve_from_sketch(&sketch_svd(&a, &b).unwrap()).unwrap(),
        sketch_inverse(&a, &b).unwrap(),
    ];
    for xs in &candidates {
        for (u, v) in x.iter().zip(xs) {
            assert!((u - v).abs() <= 1e-8 * (1.0 + u.abs()));
        }
    }
    let f = lms_coreset(&a, &b, 1, 38).unwrap();
    let xc = solve_linreg(&f.c, &f.y).unwrap();
    for (u, v) in x.iter().zip(&xc) {
        assert!((u - v).abs() <= 1e-8 * (1.0 + u.abs()));
    }
}

#[test]
fn svd_sketch_gram_error_in_f64() {
    let (a, b) = synthetic::<f64>(2000, 6, -1.0, 1.0, 42).unwrap();
    let s = sketch_svd(&a, &b).unwrap();
    assert!(relative_gram_error(&s, &a.append_column(&b).unwrap()) <= 1e-10);
}

#[test]
fn accumulation_is_reproducible_bitwise() {
    let (a, b) = synthetic::<f32>(10_000, 4, 0.0, 1000.0, 43).unwrap();
    assert_eq!(accumulate_gram(&a, &b).unwrap(), accumulate_gram(&a, &b).unwrap());
    assert_eq!(sketch_svd(&a, &b).unwrap(), sketch_svd(&a, &b).unwrap());
}
