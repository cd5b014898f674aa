//! Pricing rules: one frictionless payoff with nonzero mean makes the rule
//! linear, while a strictly concave Choquet rule has no frictionless risky
//! payoff at all.

use lawvar::{
    choquet_collapse_scan, is_frictionless, make_choquet, make_mean_affine, pricing_collapse,
    CapacitySource, DistortionFunction, RandomVariable, SampleSpace, Tolerances,
};

fn main() -> lawvar::Result<()> {
    let tol = Tolerances::default();
    let z = RandomVariable::new(vec![1.0, 3.0, 0.0, 2.0])?;
    let grid = [-2.0, -1.0, 0.5, 1.0, 2.0];

    let linear = make_mean_affine(0.95, 0.0)?;
    let v = is_frictionless(&linear, &z, &grid, 1e-10)?;
    println!("0.95 E[X]: Z frictionless? {:?}", v.outcome);
    let v = pricing_collapse(&linear, &z, 500, 0, &tol)?;
    println!("  collapse: {:?}, unit price {:?}", v.outcome, v.slope);

    let g = DistortionFunction::sampled(|u| 1.0 - (1.0 - u).powi(2), 32)?;
    let pi = make_choquet(CapacitySource::Distortion(g.clone()));
    let v = is_frictionless(&pi, &z, &grid, 1e-10)?;
    println!(
        "Choquet with g(u) = 1 - (1-u)^2: Z frictionless? {:?}",
        v.outcome
    );
    let v = pricing_collapse(&pi, &z, 500, 0, &tol)?;
    println!("  collapse: {:?}", v.outcome);

    let v = choquet_collapse_scan(
        &CapacitySource::Distortion(g),
        SampleSpace::new(4)?,
        5000,
        0,
        &tol,
    )?;
    println!(
        "  scan of {} directions: {:?}, smallest bid-ask spread {:e}",
        v.trials,
        v.outcome,
        v.residual()
    );
    Ok(())
}
