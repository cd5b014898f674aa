//! Centralized numerical tolerances. Every check reads its thresholds from
//! a [`Tolerances`] record; manifests may override individual fields.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Entrywise tolerance for equality in law (0 = exact).
    pub law: f64,
    /// Spread below which a variable counts as constant.
    pub constant: f64,
    /// Relative pivot threshold for floating-point rank.
    pub rank: f64,
    /// Relative threshold `|E[Z]| <= t (1 + max|Z|)` for the orbit dichotomy.
    pub orbit_mean_zero: f64,
    /// Slack in the pairwise submodularity inequality.
    pub submodular: f64,
    /// Comonotonic additivity residual.
    pub comonotone: f64,
    /// Relative slack for law-invariance comparisons.
    pub invariance: f64,
    /// Relative slack for the convexity inequality.
    pub convexity: f64,
    /// Relative residual for affinity along a direction.
    pub affinity: f64,
    /// Relative threshold `|E[Z]| <= t (1 + max|Z|)` for the zero-expectation branch.
    pub mean: f64,
    /// Relative residual for collapse identities.
    pub collapse: f64,
    /// Relative span-membership slack for the affine-but-not-translation-invariant example.
    pub membership: f64,
    /// Slack for dual-set membership in closed-form conjugates.
    pub dual_membership: f64,
    /// Residual for S-additivity identities.
    pub s_additivity: f64,
    /// Bisection width on the capital amount.
    pub bisection: f64,
    /// Objective level that certifies divergence along a ray.
    pub divergence_threshold: f64,
    /// Number of doublings along a ray (and of bracket expansions).
    pub ray_doublings: u32,
    /// Relative residual for frictionless-payoff checks.
    pub frictionless: f64,
    /// Relative residual for the affine representation identity.
    pub representation: f64,
    /// Bid-ask spread at or below which a Choquet direction counts as linear.
    pub spread: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            law: 0.0,
            constant: 0.0,
            rank: 1e-9,
            orbit_mean_zero: 1e-12,
            submodular: 1e-12,
            comonotone: 1e-10,
            invariance: 1e-10,
            convexity: 1e-10,
            affinity: 1e-8,
            mean: 1e-10,
            collapse: 1e-9,
            membership: 1e-9,
            dual_membership: 1e-9,
            s_additivity: 1e-8,
            bisection: 1e-10,
            divergence_threshold: 1e8,
            ray_doublings: 60,
            frictionless: 1e-10,
            representation: 1e-8,
            spread: 1e-12,
        }
    }
}

/// `|lhs - rhs| <= rel * scale`, or an exact match.
pub(crate) fn within(residual: f64, rel: f64, scale: f64) -> bool {
    residual == 0.0 || residual <= rel * scale
}
