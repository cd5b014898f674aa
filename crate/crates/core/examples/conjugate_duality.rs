//! Fenchel conjugates in closed form and by numerical ascent, and the
//! biconjugate gap on a dual grid.

use lawvar::duality::two_atom_density_grid;
use lawvar::{
    biconjugate_gap, conjugate, make_entropic, make_expected_shortfall, make_mean_affine,
    ConjugateMethod, RandomVariable, SampleSpace,
};

fn main() -> lawvar::Result<()> {
    let es = make_expected_shortfall(0.5)?;
    for y in [
        vec![-1.0, -1.0],
        vec![-1.5, -0.5],
        vec![-2.0, 0.0],
        vec![1.0, 1.0],
    ] {
        let y = RandomVariable::new(y)?;
        let closed = conjugate(&es, &y, ConjugateMethod::ClosedForm)?;
        println!(
            "ES(0.5)*({:?}) = {:?} [{:?}]",
            y.values(),
            closed.value.0,
            closed.status
        );
    }

    let ent = make_entropic(1.0)?;
    let y = RandomVariable::new(vec![-1.5, -0.5])?;
    let closed = conjugate(&ent, &y, ConjugateMethod::ClosedForm)?;
    let ascent = conjugate(&ent, &y, ConjugateMethod::Ascent)?;
    println!(
        "entropic*(Y): closed form {}, ascent {} after {} iterations",
        closed.value.0, ascent.value.0, ascent.iterations
    );

    let grid = two_atom_density_grid(1000);
    let space = SampleSpace::new(2)?;
    let tests: Vec<RandomVariable> = (-4..=4)
        .flat_map(|a| (-4..=4).map(move |b| (a, b)))
        .map(|(a, b)| RandomVariable::on(space, vec![a as f64 * 0.5, b as f64 * 0.5]))
        .collect::<lawvar::Result<_>>()?;
    let gap = biconjugate_gap(&ent, &tests, &grid)?;
    println!(
        "entropic biconjugate gap in [{:e}, {:e}] over {} points",
        gap.min, gap.max, gap.points
    );

    let mean = make_mean_affine(-1.0, 0.0)?;
    let gap = biconjugate_gap(&mean, &tests, &grid)?;
    println!("E[-X] biconjugate gap in [{:e}, {:e}]", gap.min, gap.max);
    Ok(())
}
