//! Relevance and the dichotomy for coherent law-invariant risk measures.

use lawvar::{
    is_relevant, make_expected_shortfall, make_final_remark_rho, make_mean_affine,
    relevance_dichotomy, RandomVariable, SampleSpace, Tolerances,
};

fn main() -> lawvar::Result<()> {
    let tol = Tolerances::default();
    let space = SampleSpace::new(10)?;

    for rho in [make_expected_shortfall(0.3)?, make_mean_affine(-1.0, 0.0)?] {
        let v = relevance_dichotomy(&rho, space, 10_000, 0, &tol)?;
        println!(
            "{}: {:?} ({})",
            rho.label(),
            v.outcome,
            v.note.unwrap_or_default()
        );
    }

    let rho = make_final_remark_rho();
    let s4 = SampleSpace::new(4)?;
    println!(
        "final remark rho: rho(-1) = {}, rho(0) = {}",
        rho.evaluate(&RandomVariable::constant(s4, -1.0))?,
        rho.evaluate(&RandomVariable::zero(s4))?
    );
    let v = is_relevant(&rho, s4, 100, 0)?;
    println!(
        "  relevant: {:?}, witness X = {:?}",
        v.outcome,
        v.witness.and_then(|w| w.get_vector("X"))
    );
    match relevance_dichotomy(&rho, s4, 100, 0, &tol) {
        Err(e) => println!("  dichotomy: {e}"),
        Ok(v) => println!("  dichotomy: {:?}", v.outcome),
    }
    Ok(())
}
