//! The permutations of a nonconstant `Z` span either all of `R^n` or the
//! mean-zero hyperplane, depending on whether `E[Z]` vanishes.

use lawvar::{orbit_span_dimension, orbit_spanning_set, RandomVariable};

fn main() -> lawvar::Result<()> {
    for values in [
        vec![1.0, 0.0, 0.0, 0.0],
        vec![1.0, -1.0, 0.0, 0.0],
        vec![3.0, 1.0, -2.0, -2.0],
        vec![2.0, 2.0, 2.0, 2.0],
        vec![0.5, 0.25, 0.0, 7.0],
    ] {
        let z = RandomVariable::new(values)?;
        let report = orbit_span_dimension(&z);
        println!(
            "Z = {:?}  E[Z] = {:>5}  rank = {}  {:?}  ({} generators)",
            z.values(),
            z.expectation(),
            report.rank,
            report.classification,
            report.generators_used
        );
    }

    let z = RandomVariable::new(vec![1.0, -1.0, 0.0])?;
    println!("\ngenerators for {:?}:", z.values());
    for g in orbit_spanning_set(&z) {
        println!("  {:?}", g.values());
    }
    Ok(())
}
