//! Brute-force oracles, independent of the library's algorithms.

use lawvar::duality::two_atom_density_grid;
use lawvar::{
    choquet_integral, conjugate, interval_is_singleton, make_choquet, make_entropic,
    make_expected_shortfall, make_mean_affine, matrix_rank, orbit_span_dimension, quantile,
    rearrangement_bounds, trial_rng, Capacity, CapacitySource, ConjugateMethod, DistortionFunction,
    OrbitClass, RandomVariable, SampleSpace,
};
use nalgebra::DMatrix;
use rand::Rng;

fn rv(v: Vec<f64>) -> RandomVariable {
    RandomVariable::new(v).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn integer_point(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> RandomVariable {
    rv((0..n).map(|_| rng.random_range(lo..=hi) as f64).collect())
}

#[test]
fn rearrangement_bounds_match_permutation_extremes() {
    for n in 2..=6 {
        let perms = permutations(n);
        for t in 0..60 {
            let mut rng = trial_rng(n as u64, t);
            let x = integer_point(&mut rng, n, -9, 9);
            let y = integer_point(&mut rng, n, -9, 9);
            let products: Vec<f64> = perms
                .iter()
                .map(|p| {
                    x.permuted(p)
                        .values()
                        .iter()
                        .zip(y.values())
                        .map(|(a, b)| a * b)
                        .sum::<f64>()
                        / n as f64
                })
                .collect();
            let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let b = rearrangement_bounds(&x, &y).unwrap();
            assert!(
                (b.lo - lo).abs() <= 1e-10 && (b.hi - hi).abs() <= 1e-10,
                "{x:?} {y:?}"
            );
        }
    }
}

#[test]
fn singleton_iff_a_constant_factor_on_three_atoms() {
    let values = [0.0, 1.0, 2.0];
    let grid: Vec<RandomVariable> = (0..27)
        .map(|k| rv(vec![values[k % 3], values[k / 3 % 3], values[k / 9]]))
        .collect();
    for x in &grid {
        for y in &grid {
            let constant = x.is_constant(0.0) || y.is_constant(0.0);
            assert_eq!(
                interval_is_singleton(x, y, 1e-12).unwrap(),
                constant,
                "{x:?} {y:?}"
            );
        }
    }
}

#[test]
fn quantile_matches_cdf_inversion() {
    for t in 0..200 {
        let mut rng = trial_rng(1, t);
        let n = rng.random_range(1..=9);
        let x = integer_point(&mut rng, n, -5, 5);
        for k in 1..100 {
            let alpha = k as f64 / 100.0;
            // Smallest value v with P(X <= v) >= alpha.
            let expected = x
                .values()
                .iter()
                .copied()
                .filter(|&v| {
                    x.values().iter().filter(|&&w| w <= v).count() as f64 / n as f64 >= alpha
                })
                .fold(f64::INFINITY, f64::min);
            assert_eq!(quantile(&x, alpha).unwrap(), expected, "{x:?} at {alpha}");
        }
    }
}

fn svd_rank(rows: &[Vec<f64>]) -> usize {
    let n = rows[0].len();
    let m = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * max.max(1.0)).count()
}

#[test]
fn orbit_rank_matches_full_orbit_svd() {
    for n in 2..=6 {
        let perms = permutations(n);
        for t in 0..100 {
            let mut rng = trial_rng(10 + n as u64, t);
            let z = integer_point(&mut rng, n, -3, 3);
            let rows: Vec<Vec<f64>> = perms
                .iter()
                .map(|p| z.permuted(p).values().to_vec())
                .collect();
            let report = orbit_span_dimension(&z);
            assert_eq!(report.rank, svd_rank(&rows), "{z:?}");
            assert!(report.is_consistent(n));
        }
    }
}

#[test]
fn exact_rank_agrees_with_svd_on_random_matrices() {
    for t in 0..100 {
        let mut rng = trial_rng(2, t);
        let cols = rng.random_range(1..=6);
        let base: Vec<Vec<f64>> = (0..rng.random_range(1..=4))
            .map(|_| integer_point(&mut rng, cols, -4, 4).values().to_vec())
            .collect();
        // Integer combinations of a few base rows, so rank deficiency is common.
        let rows: Vec<Vec<f64>> = (0..rng.random_range(1..=7))
            .map(|_| {
                let c: Vec<f64> = base
                    .iter()
                    .map(|_| rng.random_range(-2..=2) as f64)
                    .collect();
                (0..cols)
                    .map(|j| base.iter().zip(&c).map(|(r, k)| r[j] * k).sum())
                    .collect()
            })
            .collect();
        assert_eq!(matrix_rank(&rows, 1e-9), svd_rank(&rows), "{rows:?}");
    }
}

#[test]
fn orbit_classification_follows_the_mean() {
    for t in 0..200 {
        let mut rng = trial_rng(3, t);
        let n = rng.random_range(2..=9);
        let z = integer_point(&mut rng, n, -4, 4);
        if z.is_constant(0.0) {
            continue;
        }
        let expected = if z.values().iter().sum::<f64>() == 0.0 {
            OrbitClass::MeanZeroHyperplane
        } else {
            OrbitClass::FullSpace
        };
        assert_eq!(orbit_span_dimension(&z).classification, expected, "{z:?}");
    }
}

/// `∫_0^∞ c(X > t) dt + ∫_{-∞}^0 (c(X > t) - 1) dt`, exact on the
/// piecewise-constant integrand.
fn level_set_integral(c: &Capacity, x: &RandomVariable) -> f64 {
    let mut cuts: Vec<f64> = x.values().to_vec();
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let mask = x
            .values()
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > mid)
            .fold(0usize, |m, (i, _)| m | 1 << i);
        let level = c.value(mask);
        total += (w[1] - w[0]) * if mid >= 0.0 { level } else { level - 1.0 };
    }
    total
}

fn random_capacity(rng: &mut impl Rng, n: usize) -> Capacity {
    // Monotone by construction: c(E) = max of random weights over subsets of E, normalized.
    let size = 1usize << n;
    let mut table: Vec<f64> = (0..size).map(|_| rng.random_range(0.0..1.0)).collect();
    table[0] = 0.0;
    for mask in 1..size {
        for i in 0..n {
            if mask >> i & 1 == 1 {
                table[mask] = table[mask].max(table[mask & !(1 << i)]);
            }
        }
    }
    let top = table[size - 1];
    for v in &mut table {
        *v /= top;
    }
    table[size - 1] = 1.0;
    Capacity::new(n, table).unwrap()
}

#[test]
fn choquet_matches_level_set_quadrature() {
    for t in 0..300 {
        let mut rng = trial_rng(4, t);
        let n = rng.random_range(1..=7);
        let c = random_capacity(&mut rng, n);
        let x = rv((0..n).map(|_| rng.random_range(-10.0..10.0)).collect());
        let a = choquet_integral(&c, &x).unwrap();
        let b = level_set_integral(&c, &x);
        assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
    }
}

#[test]
fn distortion_path_matches_table_path() {
    let g = DistortionFunction::sampled(|u| u.powf(0.7), 32).unwrap();
    for t in 0..100 {
        let mut rng = trial_rng(5, t);
        let n = rng.random_range(2..=8);
        let c = Capacity::from_distortion(&g, SampleSpace::new(n).unwrap()).unwrap();
        let x = rv((0..n).map(|_| rng.random_range(-5.0..5.0)).collect());
        let a = choquet_integral(&g, &x).unwrap();
        let b = level_set_integral(&c, &x);
        assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
    }
}

/// `sup E[XY] - φ(X)` over a square grid on two atoms.
fn grid_conjugate(phi: &lawvar::Functional, y: &RandomVariable, radius: f64, steps: usize) -> f64 {
    let h = 2.0 * radius / steps as f64;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=steps {
        for j in 0..=steps {
            let x = rv(vec![-radius + i as f64 * h, -radius + j as f64 * h]);
            let v = x.dot(y).unwrap() - phi.evaluate(&x).unwrap();
            best = best.max(v);
        }
    }
    best
}

#[test]
fn entropic_conjugate_matches_grid_search() {
    let phi = make_entropic(1.0).unwrap();
    for d in [[1.0, 1.0], [1.5, 0.5], [1.9, 0.1], [0.4, 1.6]] {
        let y = rv(vec![-d[0], -d[1]]);
        let closed = conjugate(&phi, &y, ConjugateMethod::ClosedForm)
            .unwrap()
            .value
            .0;
        let grid = grid_conjugate(&phi, &y, 4.0, 800);
        assert!(closed >= grid - 1e-12, "weak duality: {closed} < {grid}");
        assert!(closed - grid <= 1e-4, "{d:?}: {closed} vs {grid}");
    }
}

#[test]
fn shortfall_conjugate_is_the_core_indicator() {
    let phi = make_expected_shortfall(0.5).unwrap();
    for (d, inside) in [
        ([1.0, 1.0], true),
        ([2.0, 0.0], true),
        ([1.5, 0.5], true),
        ([2.5, -0.5], false),
    ] {
        let y = rv(vec![-d[0], -d[1]]);
        let closed = conjugate(&phi, &y, ConjugateMethod::ClosedForm)
            .unwrap()
            .value
            .0;
        let near = grid_conjugate(&phi, &y, 5.0, 200);
        let far = grid_conjugate(&phi, &y, 50.0, 200);
        if inside {
            assert_eq!(closed, 0.0);
            assert!(near.abs() <= 1e-9 && far.abs() <= 1e-9);
        } else {
            assert_eq!(closed, f64::INFINITY);
            assert!(
                far > 5.0 * near.max(1.0),
                "grid sup should grow with the radius"
            );
        }
    }
}

#[test]
fn choquet_conjugate_matches_grid_search() {
    let g = DistortionFunction::sampled(f64::sqrt, 64).unwrap();
    let phi = make_choquet(CapacitySource::Distortion(g.clone()));
    let cap = g.eval(0.5);
    for p in [0.5, 0.6, cap - 1e-3, cap + 1e-2, 0.95] {
        let y = rv(vec![2.0 * p, 2.0 * (1.0 - p)]);
        let closed = conjugate(&phi, &y, ConjugateMethod::ClosedForm)
            .unwrap()
            .value
            .0;
        let far = grid_conjugate(&phi, &y, 40.0, 160);
        if p <= cap {
            assert_eq!(closed, 0.0, "p = {p}");
            assert!(far.abs() <= 1e-9);
        } else {
            assert_eq!(closed, f64::INFINITY, "p = {p}");
            assert!(far > 0.1);
        }
    }
}

#[test]
fn ascent_agrees_with_closed_form_on_the_density_grid() {
    let phi = make_entropic(2.0).unwrap();
    for y in two_atom_density_grid(21).iter().skip(1).take(19) {
        let closed = conjugate(&phi, y, ConjugateMethod::ClosedForm)
            .unwrap()
            .value
            .0;
        let ascent = conjugate(&phi, y, ConjugateMethod::Ascent).unwrap().value.0;
        assert!(
            (closed - ascent).abs() <= 1e-6,
            "{y:?}: {closed} vs {ascent}"
        );
    }
    let mean = make_mean_affine(3.0, -2.0).unwrap();
    let y = rv(vec![3.0, 3.0, 3.0]);
    assert_eq!(
        conjugate(&mean, &y, ConjugateMethod::ClosedForm)
            .unwrap()
            .value
            .0,
        2.0
    );
}
