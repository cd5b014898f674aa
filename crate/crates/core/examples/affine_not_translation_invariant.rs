//! A convex functional that is affine along `Z` but not translation
//! invariant along it. Without law invariance, affinity along one
//! direction does not propagate.

use lawvar::collapse::check_translation_invariance_along;
use lawvar::{affine_slope, make_example_affine_not_ti, RandomVariable, Tolerances};

fn main() -> lawvar::Result<()> {
    let w = RandomVariable::new(vec![1.0, 0.0, 0.0])?;
    let z = RandomVariable::new(vec![0.0, 1.0, 0.0])?;
    let phi = make_example_affine_not_ti(w.clone(), z.clone())?;

    let fit = affine_slope(&phi, &z, &[-3.0, -1.0, 0.0, 1.0, 3.0])?;
    println!(
        "along Z: slope {}, residual {}",
        fit.slope, fit.max_residual
    );

    for m in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        println!("phi(W + {m} Z) = {}", phi.evaluate(&w.add_scaled(m, &z))?);
    }

    let v = check_translation_invariance_along(&phi, &z, None, 200, 0, &Tolerances::default())?;
    println!(
        "translation invariance along Z: {:?}, residual {}",
        v.outcome,
        v.residual()
    );
    if let Some(wit) = v.witness {
        println!(
            "  X = {:?}, m = {:?}",
            wit.get_vector("X").map(|x| x.values().to_vec()),
            wit.get_scalar("m")
        );
    }
    Ok(())
}
