//! Deterministic randomness.
//!
//! Every random draw comes from ChaCha8 seeded with the caller's `u64` seed.
//! ChaCha is a counter-based generator: trial `t` of a check reads stream
//! `t` of the keyed cipher, so any trial can be replayed in isolation and
//! serial or parallel execution yields identical draws.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::space::RandomVariable;

pub type TrialRng = ChaCha8Rng;

/// Generator for trial `trial` of a run keyed by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Random test point of length `n`, drawn from a mixture of real-valued,
/// integer-valued, and indicator-type laws.
pub fn test_point(rng: &mut TrialRng, n: usize) -> RandomVariable {
    let values: Vec<f64> = match rng.random_range(0..4u8) {
        0 => (0..n).map(|_| rng.random_range(-10.0..=10.0)).collect(),
        1 => (0..n).map(|_| rng.random_range(-5..=5) as f64).collect(),
        2 => {
            let scale = rng.random_range(0.1..=5.0);
            let shift = rng.random_range(-3.0..=3.0);
            (0..n)
                .map(|_| shift + scale * rng.random_range(-1.0..=1.0))
                .collect()
        }
        _ => {
            let height = rng.random_range(-4.0..=4.0);
            (0..n)
                .map(|_| if rng.random_bool(0.5) { height } else { 0.0 })
                .collect()
        }
    };
    RandomVariable::from_finite(values)
}

/// Random test point guaranteed to be nonconstant (requires `n >= 2`).
pub fn nonconstant_point(rng: &mut TrialRng, n: usize) -> RandomVariable {
    debug_assert!(n >= 2);
    loop {
        let x = test_point(rng, n);
        if !x.is_constant(0.0) {
            return x;
        }
    }
}

/// Uniform random permutation of `0..n`.
pub fn permutation(rng: &mut TrialRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
