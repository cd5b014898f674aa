//! Law-invariant convex functionals on finite uniform probability spaces.
//!
//! On an `n`-atom uniform space a random variable is a vector in `R^n`, and
//! law invariance is invariance under coordinate permutations. The crate
//! provides the ingredients (quantiles and rearrangement bounds, spans of
//! permutation orbits, Choquet integrals, convex conjugates) and falsifiers
//! that test whether a convex law-invariant functional collapses to an
//! affine function of the mean once it is affine along a single direction.
//!
//! ```
//! use lawvar::{collapse_verdict, make_mean_affine, Outcome, RandomVariable, Tolerances};
//!
//! let phi = make_mean_affine(2.0, 1.0)?;
//! let z = RandomVariable::new(vec![1.0, 0.0, 0.0, 0.0])?;
//! let v = collapse_verdict(&phi, &z, 200, 0, &Tolerances::default())?;
//! assert_eq!(v.outcome, Outcome::CollapseToMean);
//! assert_eq!(v.slope, Some(2.0));
//! # Ok::<(), lawvar::Error>(())
//! ```

// Negated comparisons deliberately reject NaN alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod cli;
pub mod collapse;
pub mod duality;
pub mod error;
pub mod functional;
pub mod numeric;
pub mod orbit;
pub mod quantile;
pub mod rng;
pub mod space;
pub mod tolerance;
pub mod verdict;

pub use capacity::{
    capacity_from_distortion, choquet_integral, comonotonic_additivity_check,
    distortion_submodularity, is_submodular, Capacity, CapacitySource, DistortionFunction,
    SetFunction,
};
pub use collapse::{
    check_convexity, check_law_invariance, check_sublinear_upgrade,
    check_translation_invariance_along, choquet_collapse_scan, collapse_verdict,
    collapse_verdict_cash, collapse_verdict_prechecked, pricing_collapse, relevance_dichotomy,
    risk_collapse, spread_scan, symmetric_spread, SpreadScan,
};
pub use duality::{
    affine_representation_check, affine_slope, biconjugate_gap, conjugate, conjugate_auto,
    conjugate_with, AffineFit, ConjugateMethod, ConjugateResult, ConjugateStatus, DualityGap,
};
pub use error::{Error, Result};
pub use functional::{
    is_frictionless, is_relevant, is_strongly_relevant, make_choquet, make_entropic,
    make_example_affine_not_ti, make_expected_shortfall, make_final_remark_rho, make_mean_affine,
    make_s_additive, Claims, EligibleAsset, Functional, FunctionalSpec, SignConvention,
};
pub use numeric::{fsum, ExtReal};
pub use orbit::{matrix_rank, orbit_span_dimension, orbit_spanning_set, OrbitClass, OrbitReport};
pub use quantile::{
    comonotone_rearrangement, interval_is_singleton, quantile, rearrangement_bounds, Bounds,
    QuantileFunction,
};
pub use rng::trial_rng;
pub use space::{expectation, random_variable, same_law, Law, RandomVariable, SampleSpace};
pub use tolerance::Tolerances;
pub use verdict::{Outcome, Verdict, Witness};
