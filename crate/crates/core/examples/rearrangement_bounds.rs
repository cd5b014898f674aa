//! Range of `E[X'Y]` over all `X'` with the same law as `X`.
//!
//! The endpoints come from pairing sorted values in opposite and equal
//! order. The example confirms them by brute force over all permutations.

use lawvar::{
    comonotone_rearrangement, interval_is_singleton, quantile, rearrangement_bounds, RandomVariable,
};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn main() -> lawvar::Result<()> {
    let x = RandomVariable::new(vec![3.0, -1.0, 4.0, 1.0, 5.0])?;
    let y = RandomVariable::new(vec![2.0, 7.0, 1.0, 8.0, 2.0])?;

    let b = rearrangement_bounds(&x, &y)?;
    println!("E[X'Y] ranges over [{}, {}]", b.lo, b.hi);

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in permutations(x.n()) {
        let v = x.permuted(&p).dot(&y)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    println!("brute force over 120 permutations: [{lo}, {hi}]");

    let x_star = comonotone_rearrangement(&x, &y)?;
    println!(
        "comonotone rearrangement of X along Y: {:?}",
        x_star.values()
    );
    println!("E[X* Y] = {}", x_star.dot(&y)?);

    for alpha in [0.1, 0.5, 0.9] {
        println!("q_X({alpha}) = {}", quantile(&x, alpha)?);
    }

    let c = RandomVariable::new(vec![2.0; 5])?;
    println!(
        "singleton with constant Y: {}",
        interval_is_singleton(&x, &c, 1e-12)?
    );
    println!(
        "singleton for X, Y above: {}",
        interval_is_singleton(&x, &y, 1e-12)?
    );
    Ok(())
}
