//! Choquet integrals for explicit capacities and distortions, with the
//! submodularity and comonotonic additivity checks.

use lawvar::{
    capacity_from_distortion, choquet_integral, comonotonic_additivity_check, is_submodular,
    Capacity, CapacitySource, DistortionFunction, Outcome, RandomVariable, SampleSpace,
};

fn main() -> lawvar::Result<()> {
    let space = SampleSpace::new(4)?;
    let x = RandomVariable::new(vec![4.0, -1.0, 2.0, 0.5])?;

    let p = Capacity::probability(space)?;
    println!(
        "E_P[X] = {}  (E[X] = {})",
        choquet_integral(&p, &x)?,
        x.expectation()
    );

    let sqrt = DistortionFunction::sampled(f64::sqrt, 64)?;
    let c = capacity_from_distortion(&sqrt, space)?;
    println!("E_c[X] with g = sqrt: {}", choquet_integral(&c, &x)?);
    println!(
        "E_c[X] + E_c[-X] = {}",
        choquet_integral(&c, &x)? + choquet_integral(&c, &-&x)?
    );

    let v = is_submodular(&c, 1e-12)?;
    println!("sqrt distortion submodular: {:?}", v.outcome);

    let square = capacity_from_distortion(&DistortionFunction::sampled(|u| u * u, 64)?, space)?;
    let v = is_submodular(&square, 1e-12)?;
    println!("square distortion submodular: {:?}", v.outcome);
    if let Some(w) = &v.witness {
        println!(
            "  violating sets E = {:?}, F = {:?}",
            w.get_scalar("E"),
            w.get_scalar("F")
        );
    }

    // A capacity given by its table, indexed by bitmask over the atoms.
    let table: Vec<f64> = (0..16u32)
        .map(|m| if m == 15 { 1.0 } else { 0.0 })
        .collect();
    let unanimity = Capacity::new(4, table)?;
    println!(
        "unanimity capacity gives min X: {}",
        choquet_integral(&unanimity, &x)?
    );

    let source = CapacitySource::Distortion(sqrt);
    let v = comonotonic_additivity_check(&source, space, 500, 1, 1e-10)?;
    assert_eq!(v.outcome, Outcome::Pass);
    println!(
        "comonotonic additivity over {} pairs, max residual {:e}",
        v.trials,
        v.residual()
    );
    Ok(())
}
