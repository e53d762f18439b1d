mod common;

use caratheodory::linalg::{cholesky, cholesky_solve, least_squares, nullspace_vector, thin_svd};
use caratheodory::DenseMatrix;
use common::{matrix, norm, rng, vector};
use proptest::prelude::*;

fn orthonormality_defect(m: &DenseMatrix<f64>) -> f64 {
    let g = m.gram();
    let mut e = 0.0f64;
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let want = if i == j { 1.0 } else { 0.0 };
            e = e.max((g.get(i, j) - want).abs());
        }
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nullspace_vector_is_a_unit_kernel_element(seed in any::<u64>(), rows in 1usize..12, extra in 1usize..6) {
        let m: DenseMatrix<f64> = matrix(&mut rng(seed), rows, rows + extra, -5.0, 5.0);
        let v = nullspace_vector(&m).unwrap();
        prop_assert!((norm(&v) - 1.0).abs() <= 1e-12);
        let mv = m.mul_vec(&v).unwrap();
        prop_assert!(norm(&mv) <= 1e-10 * m.frobenius_norm());
    }

    #[test]
    fn thin_svd_factors_are_orthonormal(seed in any::<u64>(), n in 1usize..30, d in 1usize..8) {
        let m: DenseMatrix<f64> = matrix(&mut rng(seed), n, d, -3.0, 3.0);
        let svd = thin_svd(&m).unwrap();
        prop_assert!(orthonormality_defect(&svd.u) <= 1e-10);
        prop_assert!(orthonormality_defect(&svd.v) <= 1e-10);
        prop_assert!(svd.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let back = svd.reconstruct();
        prop_assert!(back.sub(&m).unwrap().frobenius_norm() <= 1e-10 * (1.0 + m.frobenius_norm()));
    }

    #[test]
    fn cholesky_solves_gram_systems(seed in any::<u64>(), d in 1usize..8) {
        let mut r = rng(seed);
        let a: DenseMatrix<f64> = matrix(&mut r, 3 * d + 2, d, -1.0, 1.0);
        let g = a.gram();
        let l = cholesky(&g).unwrap();
        let back = l.matmul(&l.transpose()).unwrap();
        prop_assert!(back.sub(&g).unwrap().frobenius_norm() <= 1e-12 * g.frobenius_norm());
        let x_true: Vec<f64> = vector(&mut r, d, -1.0, 1.0);
        let rhs = g.mul_vec(&x_true).unwrap();
        let x = cholesky_solve(&l, &rhs).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            prop_assert!((u - v).abs() <= 1e-6);
        }
    }

    #[test]
    fn least_squares_residual_is_orthogonal(seed in any::<u64>(), n in 8usize..60, d in 1usize..6) {
        let mut r = rng(seed);
        let c: DenseMatrix<f64> = matrix(&mut r, n, d, -2.0, 2.0);
        let y: Vec<f64> = vector(&mut r, n, -2.0, 2.0);
        let x = least_squares(&c, &y).unwrap();
        let res: Vec<f64> = c.mul_vec(&x).unwrap().iter().zip(&y).map(|(p, t)| p - t).collect();
        let grad = c.t_mul_vec(&res).unwrap();
        prop_assert!(norm(&grad) <= 1e-8 * norm(&c.t_mul_vec(&y).unwrap()).max(1e-300));
    }
}

#[test]
fn square_system_is_solved_exactly() {
    let c = DenseMatrix::<f64>::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
    let x = least_squares(&c, &[3.0, 5.0]).unwrap();
    assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
}
