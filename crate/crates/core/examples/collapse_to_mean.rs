//! Collapse classification. An affine direction forces an affine function
//! of the mean; its absence shows as a positive symmetric spread.

use lawvar::{
    collapse_verdict, collapse_verdict_cash, make_entropic, make_expected_shortfall,
    make_mean_affine, spread_scan, Claims, Functional, RandomVariable, SampleSpace, Tolerances,
};

fn main() -> lawvar::Result<()> {
    let tol = Tolerances::default();
    let mut e1 = vec![0.0; 10];
    e1[0] = 1.0;
    let z = RandomVariable::new(e1)?;

    let phi = make_mean_affine(2.0, 1.0)?;
    let v = collapse_verdict(&phi, &z, 1000, 0, &tol)?;
    println!(
        "2 E[X] + 1 along e_1: {:?}, slope {:?}, residual {:e}",
        v.outcome,
        v.slope,
        v.residual()
    );

    let ent = make_entropic(1.0)?;
    let v = collapse_verdict(&ent, &z, 1000, 0, &tol)?;
    println!("entropic along e_1: {:?}", v.outcome);

    for phi in [make_expected_shortfall(0.1)?, make_entropic(1.0)?] {
        let scan = spread_scan(&phi, SampleSpace::new(10)?, 2000, 0)?;
        println!(
            "{}: min of phi(Z) + phi(-Z) - 2 phi(0) over {} directions = {:e}",
            phi.label(),
            scan.directions,
            scan.min_spread
        );
    }

    let square = Functional::custom(
        "mean_squared",
        Claims {
            convex: true,
            law_invariant: true,
            ..Claims::default()
        },
        |x| x.expectation().powi(2),
    );
    let z0 = RandomVariable::new(vec![1.0, -1.0, 0.0, 0.0])?;
    let v = collapse_verdict(&square, &z0, 1000, 0, &tol)?;
    println!(
        "E[X]^2 along a mean-zero Z: {:?}, residual {:e}",
        v.outcome,
        v.residual()
    );
    match collapse_verdict_cash(&square, &z0, 1000, 0, &tol) {
        Err(e) => println!("with the cash-additivity premise: {e}"),
        Ok(v) => println!("with the cash-additivity premise: {:?}", v.outcome),
    }
    Ok(())
}
