//! Capital requirements raised in a risky asset. An `S`-additive convex
//! law-invariant requirement reduces to a multiple of `E[-X]`.

use lawvar::{
    make_mean_affine, make_s_additive, risk_collapse, EligibleAsset, RandomVariable, Tolerances,
};

fn main() -> lawvar::Result<()> {
    let asset = EligibleAsset::new(2.0, RandomVariable::new(vec![1.0, 3.0])?)?;
    let base = make_mean_affine(-1.0, 0.0)?;
    let rho = make_s_additive(base, asset.clone(), (-1e6, 1e6))?;

    for x in [vec![0.0, 0.0], vec![1.0, -1.0], vec![-4.0, 2.5]] {
        let x = RandomVariable::new(x)?;
        let r = rho.evaluate(&x)?;
        let after = rho.evaluate(&x.add_scaled(r / asset.price(), asset.payoff()))?;
        println!(
            "rho({:?}) = {r:.10}; after buying rho/S0 units: {after:.2e}",
            x.values()
        );
    }

    let v = risk_collapse(&rho, &asset, 1000, 0, &Tolerances::default())?;
    println!(
        "risk collapse: {:?}, slope S0/E[S1] = {:?}, residual {:e}",
        v.outcome,
        v.slope,
        v.residual()
    );
    Ok(())
}
