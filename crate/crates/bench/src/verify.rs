//! End-to-end invariant checks: Caratheodory exactness, oracle agreement,
//! Gram exactness, fold identity, solver equivalence and the PCA identities.

use std::time::Instant;

use caratheodory::caratheodory::{
    caratheodory_slow, default_cluster_count, fast_caratheodory, CaratheodorySet, SlowVariant,
};
use caratheodory::covariance::{caratheodory_matrix, relative_gram_error, sparse_caratheodory_matrix};
use caratheodory::datasets::synthetic;
use caratheodory::linalg::least_squares;
use caratheodory::lms::{build_folded, CoresetParams, FoldedCoreset, SolverKind, DEFAULT_BLOCK_WIDTH};
use caratheodory::pca::{pca_coreset, svd_coreset, SubspaceQuery};
use caratheodory::weighted::WeightedSet;
use caratheodory::{DenseMatrix, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(criterion: u8, name: &'static str, start: Instant, outcome: Result<String, String>) -> Self {
        let secs = start.elapsed().as_secs_f64();
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Self {
            criterion,
            name,
            passed,
            detail: format!("{detail} ({secs:.1} s)"),
        }
    }
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {}: {verdict}: {}: {}", self.criterion, self.name, self.detail)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_matrix(r: &mut ChaCha8Rng, n: usize, d: usize, low: f64, high: f64) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(n, d, |_, _| r.random_range(low..high)).expect("n, d >= 1")
}

/// Points in `[-10, 10)^d`, positive weights summing to one.
fn weighted_set(r: &mut ChaCha8Rng, n: usize, d: usize) -> WeightedSet<f64> {
    let points = uniform_matrix(r, n, d, -10.0, 10.0);
    let raw: Vec<f64> = (0..n).map(|_| r.random_range(0.01..1.0)).collect();
    WeightedSet::new(points, raw)
        .and_then(WeightedSet::normalized)
        .expect("positive weights")
}

/// Points on the grid `{-2, ..., 2}^d` so duplicates and affine
/// dependencies are common; some weights are zero.
fn degenerate_set(r: &mut ChaCha8Rng, n: usize, d: usize) -> WeightedSet<f64> {
    let points = DenseMatrix::from_fn(n, d, |_, _| r.random_range(-2i32..=2) as f64).expect("n, d >= 1");
    let mut raw: Vec<f64> = (0..n)
        .map(|_| if r.random_bool(0.2) { 0.0 } else { r.random_range(0.01..1.0) })
        .collect();
    raw[0] = 1.0;
    WeightedSet::new(points, raw)
        .and_then(WeightedSet::normalized)
        .expect("positive total weight")
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// A weighted subset of at most `d + 1` input points with positive weights,
/// weight sum one and the input's weighted mean.
fn check_caratheodory_set(input: &WeightedSet<f64>, out: &CaratheodorySet<f64>, tol: f64) -> Result<(), String> {
    let (n, d) = (input.len(), input.dim());
    if out.len() > d + 1 {
        return Err(format!("{} points for d = {d}", out.len()));
    }
    if out.indices.windows(2).any(|w| w[0] >= w[1]) || out.indices.iter().any(|&i| i >= n) {
        return Err(format!("indices {:?} are not an ascending subset of 0..{n}", out.indices));
    }
    if out.weights.iter().any(|&w| !(w > 0.0)) {
        return Err("non-positive output weight".into());
    }
    let sum = out.weight_sum();
    if (sum - 1.0).abs() > tol {
        return Err(format!("weights sum to {sum:e}"));
    }
    let want = input.weighted_sum();
    let got = out.weighted_sum(input.points());
    let err = want.iter().zip(&got).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
    let bound = tol * (1.0 + max_abs(&want));
    if err > bound {
        return Err(format!("mean error {err:e} > {bound:e}"));
    }
    Ok(())
}

/// Criterion 1: 200 fuzzed weighted sets, `n ≤ 10⁴`, `d ≤ 10`.
pub fn caratheodory_exactness(seed: u64) -> CheckResult {
    let start = Instant::now();
    let run = || -> Result<String, String> {
        let mut r = rng(seed);
        let mut worst = 0usize;
        for case in 0..200 {
            let n = r.random_range(1..=10_000);
            let d = r.random_range(1..=10);
            let input = weighted_set(&mut r, n, d);
            let k = default_cluster_count(d, SlowVariant::Quadratic);
            let out = fast_caratheodory(&input, k).map_err(|e| format!("case {case} (n={n}, d={d}): {e}"))?;
            check_caratheodory_set(&input, &out, 1e-10).map_err(|e| format!("case {case} (n={n}, d={d}): {e}"))?;
            worst = worst.max(n);
        }
        Ok(format!("200 sets up to n = {worst}"))
    };
    CheckResult::new(1, "Caratheodory exactness", start, run())
}

/// Some subset of at most `d + 1` points with nonnegative weights has the
/// input's weighted mean and unit weight sum.
fn oracle_subset_exists(input: &WeightedSet<f64>) -> bool {
    let (n, d) = (input.len(), input.dim());
    let mean = input.weighted_sum();
    let mut rhs = mean.clone();
    rhs.push(1.0);
    let tol = 1e-9 * (1.0 + max_abs(&mean));
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size > d + 1 {
            continue;
        }
        let chosen: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let system = DenseMatrix::from_fn(d + 1, size, |row, c| {
            if row < d {
                input.points().get(chosen[c], row)
            } else {
                1.0
            }
        })
        .expect("nonempty");
        let Ok(w) = least_squares(&system, &rhs) else {
            continue;
        };
        if w.iter().any(|&v| v < -1e-12) {
            continue;
        }
        let fit = system.mul_vec(&w).expect("shapes agree");
        if fit.iter().zip(&rhs).all(|(u, v)| (u - v).abs() <= tol) {
            return true;
        }
    }
    false
}

/// Criterion 2: exhaustive-subset oracle on `n ≤ 8`, `d ≤ 3`.
pub fn oracle_equivalence(seed: u64) -> CheckResult {
    let start = Instant::now();
    let run = || -> Result<String, String> {
        let mut r = rng(seed.wrapping_add(1));
        let mut cases = 0;
        for case in 0..300 {
            let n = r.random_range(1..=8);
            let d = r.random_range(1..=3);
            let input = if case % 3 == 2 {
                degenerate_set(&mut r, n, d)
            } else {
                weighted_set(&mut r, n, d)
            };
            let label = |what: &str, e: String| format!("case {case} (n={n}, d={d}) {what}: {e}");
            if !oracle_subset_exists(&input) {
                return Err(label("oracle", "no valid subset found".into()));
            }
            let slow = caratheodory_slow(&input).map_err(|e| label("slow", e.to_string()))?;
            check_caratheodory_set(&input, &slow, 1e-10).map_err(|e| label("slow", e))?;
            let fast = fast_caratheodory(&input, d + 2).map_err(|e| label("fast", e.to_string()))?;
            check_caratheodory_set(&input, &fast, 1e-10).map_err(|e| label("fast", e))?;
            cases += 1;
        }
        Ok(format!("{cases} sets, oracle, slow and fast agree"))
    };
    CheckResult::new(2, "oracle equivalence", start, run())
}

/// `k2 = ⌈d²/d'⌉`, `k1 = 2⌈d²/k2⌉ + 2` for a `d`-column matrix.
fn sparse_matrix_params(d: usize) -> (usize, usize) {
    let dd = d * d;
    let k2 = dd.div_ceil(DEFAULT_BLOCK_WIDTH);
    (2 * dd.div_ceil(k2) + 2, k2)
}

fn gram_errors<T: Real>(a: &DenseMatrix<f64>) -> caratheodory::Result<(f64, f64)> {
    let at = a.cast::<T>();
    let d = a.cols();
    let exact = caratheodory_matrix(&at, 2 * d * d + 2)?;
    let (k1, k2) = sparse_matrix_params(d);
    let sparse = sparse_caratheodory_matrix(&at, k1, k2)?;
    Ok((relative_gram_error(&exact.matrix, a), relative_gram_error(&sparse.matrix, a)))
}

/// Criterion 3: `‖SᵀS − AᵀA‖_F / ‖AᵀA‖_F` for both matrix coresets.
pub fn gram_exactness(seed: u64) -> CheckResult {
    let start = Instant::now();
    let run = || -> Result<String, String> {
        let (mut worst64, mut worst32) = (0.0f64, 0.0f64);
        for (i, n) in [100, 1000, 10_000].into_iter().enumerate() {
            for d in 2..=10 {
                let (a, _) = synthetic::<f64>(n, d, 0.0, 1000.0, seed + (10 * i + d) as u64).map_err(|e| e.to_string())?;
                let label = |p: &str| format!("n = {n}, d = {d}, {p}");
                let (e, s) = gram_errors::<f64>(&a).map_err(|e| format!("{}: {e}", label("f64")))?;
                if e.max(s) > 1e-10 {
                    return Err(format!("{}: errors {e:e} / {s:e} > 1e-10", label("f64")));
                }
                worst64 = worst64.max(e.max(s));
                let (e, s) = gram_errors::<f32>(&a).map_err(|e| format!("{}: {e}", label("f32")))?;
                if e.max(s) > 1e-3 {
                    return Err(format!("{}: errors {e:e} / {s:e} > 1e-3", label("f32")));
                }
                worst32 = worst32.max(e.max(s));
            }
        }
        Ok(format!("worst f64 {worst64:.1e}, worst f32 {worst32:.1e}"))
    };
    CheckResult::new(3, "Gram exactness", start, run())
}

fn squared_residual<'a>(rows: impl Iterator<Item = &'a [f64]>, targets: &[f64], x: &[f64]) -> f64 {
    rows.zip(targets)
        .map(|(row, t)| {
            let p: f64 = row.iter().zip(x).map(|(u, v)| u * v).sum();
            (p - t).powi(2)
        })
        .sum()
}

/// Largest relative gap of the per-fold squared-norm identity.
fn fold_identity_gap(a: &DenseMatrix<f64>, b: &[f64], f: &FoldedCoreset<f64>, xs: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, rows) in f.source_folds.iter().enumerate() {
        let (c, y) = f.fold(i).expect("fold exists");
        for x in xs {
            let full = squared_residual(rows.clone().map(|r| a.row(r)), &b[rows.clone()], x);
            let small = squared_residual(c.row_iter(), &y, x);
            worst = worst.max((full - small).abs() / full.max(f64::MIN_POSITIVE));
        }
    }
    worst
}

fn default_variants(d: usize) -> [(&'static str, CoresetParams); 2] {
    [
        ("exact", CoresetParams::default_exact(d)),
        ("++", CoresetParams::default_sparse(d, DEFAULT_BLOCK_WIDTH)),
    ]
}

/// Criterion 4: `‖A_i(x|−1)‖² = ‖(C_i|y_i)(x|−1)‖²` per fold for 50 `x`.
pub fn fold_identity(seed: u64) -> CheckResult {
    let start = Instant::now();
    let run = || -> Result<String, String> {
        let (n, d) = (10_000, 7);
        let (a, b) = synthetic::<f64>(n, d, 0.0, 1000.0, seed).map_err(|e| e.to_string())?;
        let mut r = rng(seed.wrapping_add(4));
        let xs: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..d).map(|_| r.random_range(-1.0..1.0)).collect())
            .collect();
        let mut worst = 0.0f64;
        for m in [1, 3] {
            for (name, params) in default_variants(d) {
                let f = build_folded(&a, &b, m, params).map_err(|e| format!("{name}, m = {m}: {e}"))?;
                let gap = fold_identity_gap(&a, &b, &f, &xs);
                if !(gap <= 1e-8) {
                    return Err(format!("{name}, m = {m}: relative gap {gap:e}"));
                }
                worst = worst.max(gap);
            }
        }
        Ok(format!("worst relative gap {worst:.1e}"))
    };
    CheckResult::new(4, "fold identity", start, run())
}

/// Largest `|u − v| / (1 + |u|)`, or `|u − v|` when `relative` is false.
fn solution_gap(x0: &[f64], x1: &[f64], relative: bool) -> f64 {
    x0.iter()
        .zip(x1)
        .map(|(u, v)| {
            let e = (u - v).abs();
            if relative {
                e / (1.0 + u.abs())
            } else {
                e
            }
        })
        .fold(0.0, f64::max)
}

/// Criterion 5: every solver gives the same answer on the full data and on
/// the coreset, `β`-scaled for lasso and elastic net.
pub fn solver_equivalence(seed: u64) -> CheckResult {
    let start = Instant::now();
    let run = || -> Result<String, String> {
        let (n, d) = (10_000, 7);
        let (a, b) = synthetic::<f64>(n, d, 0.0, 1000.0, seed.wrapping_add(5)).map_err(|e| e.to_string())?;
        let cases = [
            (SolverKind::Linear, 0.0, 1e-8),
            (SolverKind::Ridge, 1e4, 1e-8),
            (SolverKind::Lasso, 2.0, 1e-6),
            (SolverKind::Elastic, 2.0, 1e-6),
        ];
        let mut full = Vec::new();
        for &(solver, alpha, _) in &cases {
            full.push(solver.fit(&a, &b, alpha, 0.5).map_err(|e| format!("{solver} on A: {e}"))?);
        }
        let mut worst = [0.0f64; 4];
        for m in [1, 3] {
            for (name, params) in default_variants(d) {
                let f = build_folded(&a, &b, m, params).map_err(|e| format!("{name}, m = {m}: {e}"))?;
                let (bc, by) = f.scaled();
                for (i, &(solver, alpha, tol)) in cases.iter().enumerate() {
                    let (c, y) = if solver.row_normalized() { (&bc, &by) } else { (&f.c, &f.y) };
                    let x = solver
                        .fit(c, y, alpha, 0.5)
                        .map_err(|e| format!("{solver} on {name} coreset, m = {m}: {e}"))?;
                    let gap = solution_gap(&full[i], &x, !solver.row_normalized());
                    if !(gap <= tol) {
                        return Err(format!("{solver} on {name} coreset, m = {m}: gap {gap:e} > {tol:e}"));
                    }
                    worst[i] = worst[i].max(gap);
                }
            }
        }
        Ok(format!(
            "worst gaps linear {:.1e}, ridge {:.1e}, lasso {:.1e}, elastic {:.1e}",
            worst[0], worst[1], worst[2], worst[3]
        ))
    };
    CheckResult::new(5, "solver equivalence", start, run())
}

/// Random `d × cols` matrix with orthonormal columns (modified Gram-Schmidt).
fn random_orthonormal(r: &mut ChaCha8Rng, d: usize, cols: usize) -> DenseMatrix<f64> {
    loop {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cols);
        for _ in 0..cols {
            let mut v: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
            for q in &basis {
                let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm < 1e-3 {
                break;
            }
            v.iter_mut().for_each(|a| *a /= norm);
            basis.push(v);
        }
        if basis.len() == cols {
            return DenseMatrix::from_fn(d, cols, |i, j| basis[j][i]).expect("d, cols >= 1");
        }
    }
}

/// Criterion 7: subspace energy and translated PCA cost on a random
/// `500 × 4` input for 10 random queries.
pub fn pca_identities(seed: u64) -> CheckResult {
    let start = Instant::now();
    let run = || -> Result<String, String> {
        let mut r = rng(seed.wrapping_add(7));
        let (n, d) = (500, 4);
        let a = uniform_matrix(&mut r, n, d, -100.0, 100.0);
        let k = (d + 1) * (d + 1) + 2;
        let s = svd_coreset(&a, k).map_err(|e| e.to_string())?.matrix;
        let pca = pca_coreset(&a, k).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for q in 0..10 {
            let j = r.random_range(1..d);
            let y = random_orthonormal(&mut r, d, d - j);
            let ell: Vec<f64> = (0..d).map(|_| r.random_range(-200.0..200.0)).collect();
            let linear = SubspaceQuery::linear(y.clone(), j).map_err(|e| e.to_string())?;
            let affine = SubspaceQuery::new(y, ell, j).map_err(|e| e.to_string())?;
            let pairs = [
                ("energy", linear.cost(&a), linear.cost(&s)),
                ("affine cost", affine.cost(&a), pca.cost(&affine)),
            ];
            for (what, full, small) in pairs {
                let (full, small) = (full.map_err(|e| e.to_string())?, small.map_err(|e| e.to_string())?);
                let gap = (full - small).abs() / full.max(f64::MIN_POSITIVE);
                if !(gap <= 1e-9) {
                    return Err(format!("query {q} (j = {j}) {what}: {full} vs {small}"));
                }
                worst = worst.max(gap);
            }
        }
        Ok(format!("{} coreset rows, worst relative gap {worst:.1e}", pca.len()))
    };
    CheckResult::new(7, "PCA and SVD identities", start, run())
}

/// Criteria 1-5 and 7 in order.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    vec![
        caratheodory_exactness(seed),
        oracle_equivalence(seed),
        gram_exactness(seed),
        fold_identity(seed),
        solver_equivalence(seed),
        pca_identities(seed),
    ]
}
