//! Lower quantile functions and the rearrangement interval
//! `{E[X'Y] : X' ~ X}`.
//!
//! On `n` uniform atoms the lower quantile `q_X(α) = inf{m : P(X <= m) >= α}`
//! is the step function through the ascending order statistics, and the
//! rearrangement interval has the anti-monotone and comonotone pairings as
//! its endpoints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{fsum, sorted};
use crate::space::{check_same_space, RandomVariable};

/// Left-continuous quantile function of a variable on uniform atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileFunction {
    sorted: Vec<f64>,
}

impl QuantileFunction {
    pub fn of(x: &RandomVariable) -> Self {
        QuantileFunction {
            sorted: x.sorted_values(),
        }
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Mass of each step.
    pub fn weight(&self) -> f64 {
        1.0 / self.sorted.len() as f64
    }

    pub fn at(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!(
                "quantile level {alpha} outside (0, 1)"
            )));
        }
        Ok(self.sorted[lower_rank(alpha, self.sorted.len()) - 1])
    }
}

/// Smallest `k` in `1..=n` with `k/n >= alpha`, comparing the floating-point
/// ratio so that levels like `0.3` at `n = 10` resolve to `k = 3`.
pub(crate) fn lower_rank(alpha: f64, n: usize) -> usize {
    let nf = n as f64;
    let mut k = ((alpha * nf).ceil() as usize).clamp(1, n);
    while k > 1 && (k - 1) as f64 / nf >= alpha {
        k -= 1;
    }
    while k < n && (k as f64) / nf < alpha {
        k += 1;
    }
    k
}

/// `q_X(α)` for the lower quantile convention.
pub fn quantile(x: &RandomVariable, alpha: f64) -> Result<f64> {
    QuantileFunction::of(x).at(alpha)
}

/// Endpoints of the rearrangement interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lo - tol && v <= self.hi + tol
    }
}

/// `lo = ∫ q_X(α) q_Y(1-α) dα`, `hi = ∫ q_X(α) q_Y(α) dα`.
pub fn rearrangement_bounds(x: &RandomVariable, y: &RandomVariable) -> Result<Bounds> {
    check_same_space(x, y)?;
    let xs = x.sorted_values();
    let ys = y.sorted_values();
    let n = xs.len() as f64;
    let hi = fsum(xs.iter().zip(&ys).map(|(a, b)| a * b)) / n;
    let lo = fsum(xs.iter().zip(ys.iter().rev()).map(|(a, b)| a * b)) / n;
    Ok(Bounds { lo, hi })
}

/// Whether the rearrangement interval collapses to a point.
pub fn interval_is_singleton(x: &RandomVariable, y: &RandomVariable, tol: f64) -> Result<bool> {
    Ok(rearrangement_bounds(x, y)?.width() <= tol)
}

/// The rearrangement `Y' ~ Y` ordered like `X`, so `E[XY'] = hi`.
/// Ties in `X` are broken by atom index.
pub fn comonotone_rearrangement(x: &RandomVariable, y: &RandomVariable) -> Result<RandomVariable> {
    check_same_space(x, y)?;
    let xv = x.values();
    let mut order: Vec<usize> = (0..xv.len()).collect();
    order.sort_by(|&i, &j| xv[i].total_cmp(&xv[j]).then(i.cmp(&j)));
    let ys = sorted(y.values());
    let mut out = vec![0.0; xv.len()];
    for (rank, &atom) in order.iter().enumerate() {
        out[atom] = ys[rank];
    }
    Ok(RandomVariable::from_finite(out))
}
