//! Linear span of the permutation orbit `L_Z = {Z' : Z' ~ Z}`.
//!
//! For nonconstant `Z` the span is all of `R^n` when `E[Z] != 0` and the
//! mean-zero hyperplane when `E[Z] = 0`. Instead of the `n!` permutation
//! images we use `Z` plus, for every atom pair `(i, j)`, one image carrying
//! two distinct values of `Z` at `i` and `j` together with its `(i j)` swap.
//! The difference of such a pair is a nonzero multiple of `e_i - e_j`, so
//! these `O(n^2)` vectors span the same space as the full orbit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};
use serde::{Deserialize, Serialize};

use crate::numeric::max_abs;
use crate::space::RandomVariable;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitClass {
    FullSpace,
    MeanZeroHyperplane,
    ConstantLine,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub rank: usize,
    pub classification: OrbitClass,
    pub generators_used: usize,
}

impl OrbitReport {
    /// Rank matches the dimension implied by the classification.
    pub fn is_consistent(&self, n: usize) -> bool {
        let expected = match self.classification {
            OrbitClass::FullSpace => n,
            OrbitClass::MeanZeroHyperplane => n - 1,
            OrbitClass::ConstantLine => 1,
            OrbitClass::Zero => 0,
        };
        self.rank == expected
    }
}

/// Generators whose span equals the span of the full permutation orbit of `z`.
/// Exact duplicates are dropped, keeping first occurrences.
pub fn orbit_spanning_set(z: &RandomVariable) -> Vec<RandomVariable> {
    let n = z.n();
    let values = z.values();
    let mut out = vec![z.clone()];
    if z.is_constant(0.0) {
        return out;
    }
    // Two atoms carrying distinct values.
    let p = 0;
    let q = (1..n)
        .find(|&k| values[k] != values[p])
        .expect("nonconstant");
    let (a, b) = (values[p], values[q]);

    for i in 0..n {
        for j in (i + 1)..n {
            let mut w = values.to_vec();
            let src = w.iter().position(|&v| v == a).expect("value present");
            w.swap(src, i);
            let src = (0..n)
                .find(|&k| k != i && w[k] == b)
                .expect("value present");
            w.swap(src, j);
            let mut swapped = w.clone();
            swapped.swap(i, j);
            for v in [w, swapped] {
                let v = RandomVariable::from_finite(v);
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Rank of the orbit span and the density classification.
pub fn orbit_span_dimension(z: &RandomVariable) -> OrbitReport {
    orbit_span_dimension_with(z, &Tolerances::default())
}

pub fn orbit_span_dimension_with(z: &RandomVariable, tol: &Tolerances) -> OrbitReport {
    let generators = orbit_spanning_set(z);
    let rows: Vec<Vec<f64>> = generators.iter().map(|g| g.values().to_vec()).collect();
    let rank = matrix_rank(&rows, tol.rank);
    OrbitReport {
        rank,
        classification: classify(z, tol),
        generators_used: generators.len(),
    }
}

fn classify(z: &RandomVariable, tol: &Tolerances) -> OrbitClass {
    let scale = 1.0 + max_abs(z.values());
    let mean_is_zero = z.expectation().abs() <= tol.orbit_mean_zero * scale;
    match (z.is_constant(tol.constant), mean_is_zero) {
        (false, false) => OrbitClass::FullSpace,
        (false, true) => OrbitClass::MeanZeroHyperplane,
        (true, false) => OrbitClass::ConstantLine,
        (true, true) => OrbitClass::Zero,
    }
}

/// Row rank of a dense matrix.
///
/// Integer-valued input (every entry an integer of magnitude at most 2^53)
/// is ranked exactly by fraction-free elimination; anything else by
/// floating-point elimination with pivot threshold `rel_tol * max|entry|`.
pub fn matrix_rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    let integral = rows
        .iter()
        .flatten()
        .all(|v| v.fract() == 0.0 && v.abs() <= 9_007_199_254_740_992.0);
    if integral {
        let small: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| v as i128).collect())
            .collect();
        if let Some(rank) = exact_rank(small) {
            return rank;
        }
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v as i64)).collect())
            .collect();
        return exact_rank(big).expect("bigint elimination cannot overflow");
    }
    float_rank(rows, rel_tol)
}

/// Incremental fraction-free row echelon. `None` on overflow.
fn exact_rank<T>(rows: Vec<Vec<T>>) -> Option<usize>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    let width = rows.first().map_or(0, Vec::len);
    let mut basis: Vec<(usize, Vec<T>)> = Vec::new();
    for mut row in rows {
        for (pivot, b) in &basis {
            if row[*pivot].is_zero() {
                continue;
            }
            let f = b[*pivot].clone();
            let g = row[*pivot].clone();
            for (r, bv) in row.iter_mut().zip(b) {
                let lhs = f.checked_mul(r)?;
                let rhs = g.checked_mul(bv)?;
                *r = lhs.checked_sub(&rhs)?;
            }
            let d = row.iter().fold(T::zero(), |acc, v| acc.gcd(v));
            if !d.is_zero() && !d.is_one() {
                for r in row.iter_mut() {
                    *r = r.div_floor(&d);
                }
            }
        }
        if let Some(p) = row.iter().position(|v| !v.is_zero()) {
            basis.push((p, row));
            if basis.len() == width {
                break;
            }
        }
    }
    Some(basis.len())
}

fn float_rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let scale = rows.iter().map(|r| max_abs(r)).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let threshold = rel_tol * scale;
    let mut basis: Vec<(usize, Vec<f64>)> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (p, b) in &basis {
            let f = r[*p] / b[*p];
            if f != 0.0 {
                for (x, bv) in r.iter_mut().zip(b) {
                    *x -= f * bv;
                }
                r[*p] = 0.0;
            }
        }
        let (p, m) =
            r.iter().enumerate().fold(
                (0, 0.0),
                |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc },
            );
        if m > threshold {
            basis.push((p, r));
            if basis.len() == width {
                break;
            }
        }
    }
    basis.len()
}

/// Basis of `{Y : E[GY] = 0 for every generator G of z}`, the orthogonal
/// complement of the orbit span.
pub fn annihilator(z: &RandomVariable, rel_tol: f64) -> Vec<RandomVariable> {
    let rows: Vec<Vec<f64>> = orbit_spanning_set(z)
        .iter()
        .map(|g| g.values().to_vec())
        .collect();
    null_space(rows, rel_tol)
        .into_iter()
        .map(RandomVariable::from_finite)
        .collect()
}

fn null_space(mut a: Vec<Vec<f64>>, rel_tol: f64) -> Vec<Vec<f64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let scale = a.iter().map(|r| max_abs(r)).fold(0.0, f64::max);
    let threshold = rel_tol * scale.max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let (best, val) = (row..m)
            .map(|r| (r, a[r][col].abs()))
            .fold((row, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if val <= threshold {
            continue;
        }
        a.swap(row, best);
        let p = a[row][col];
        for v in a[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = a[row].clone();
        for (r, other) in a.iter_mut().enumerate() {
            if r != row && other[col] != 0.0 {
                let f = other[col];
                for (x, pv) in other.iter_mut().zip(&pivot_row) {
                    *x -= f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0.0; n];
            v[f] = 1.0;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f];
            }
            v
        })
        .collect()
}
