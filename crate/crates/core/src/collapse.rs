//! Falsifiers for law invariance, convexity, and translation invariance,
//! and the collapse classifications built on them.
//!
//! A convex law-invariant functional that is affine along one nonconstant
//! direction `Z` collapses: to `a E[X] + φ(0)` when `E[Z] != 0`, and to
//! `φ(E[X])` when `E[Z] = 0`. The checks here run that implication forwards
//! on random and structured inputs. Premises that hold while the conclusion
//! fails are reported as [`Outcome::Inconsistent`], which should be
//! unreachable for correct functionals.
//!
//! Every randomized check reports "no counterexample in N trials", never a
//! proof. Trial `t` draws from stream `t` of the seeded generator, so any
//! witness can be replayed from `(seed, t)` alone.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::CapacitySource;
use crate::duality::{affine_slope, AffineFit, DEFAULT_M_GRID};
use crate::error::{Error, Result};
use crate::functional::{
    is_frictionless, is_strongly_relevant, structured_points, EligibleAsset, Functional,
    SignConvention, DEFAULT_LAMBDA_GRID,
};
use crate::numeric::max_abs;
use crate::rng::{nonconstant_point, permutation, test_point, trial_rng};
use crate::space::{check_same_space, RandomVariable, SampleSpace};
use crate::tolerance::{within, Tolerances};
use crate::verdict::{Outcome, Verdict, Witness};

/// Up to this many atoms, structured scans include every subset indicator.
const ALL_SUBSETS_ATOMS: usize = 12;
/// Trial budget for re-verifying premises inside composite checks.
const PREMISE_TRIALS: u64 = 500;

fn witness_for(trial: Option<u64>) -> Witness {
    trial.map_or_else(Witness::new, Witness::at_trial)
}

/// Probes, zero, structured points, then `trials` random points.
fn candidate_points(
    phi: &Functional,
    space: SampleSpace,
    trials: u64,
    seed: u64,
) -> Vec<(Option<u64>, RandomVariable)> {
    let mut out: Vec<(Option<u64>, RandomVariable)> =
        phi.probes().into_iter().map(|x| (None, x)).collect();
    out.push((None, RandomVariable::zero(space)));
    out.extend(structured_points(space).into_iter().map(|x| (None, x)));
    for t in 0..trials {
        out.push((Some(t), test_point(&mut trial_rng(seed, t), space.n())));
    }
    out
}

fn equal_values(a: f64, b: f64, rel: f64, reference: f64) -> (bool, f64) {
    if a == b {
        return (true, 0.0);
    }
    let residual = (a - b).abs();
    if !residual.is_finite() {
        return (false, f64::INFINITY);
    }
    (
        within(residual, rel, a.abs().max(b.abs()).max(reference)),
        residual,
    )
}

/// `φ(X) = φ(σX)` for random `X` and permutations `σ`. The first case is
/// the two-indicator pair `X = e_0`, `σ = (0 1)`.
pub fn check_law_invariance(
    phi: &Functional,
    space: SampleSpace,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "law_invariance";
    let space = phi.space_or(space)?.require_nontrivial()?;
    let n = space.n();
    let reference = phi.reference_scale(space);
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let mut cases: Vec<(Option<u64>, RandomVariable, Vec<usize>)> =
        vec![(None, RandomVariable::indicator(space, &[0]), swap.clone())];
    for p in phi.probes() {
        cases.push((None, p, swap.clone()));
    }
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let x = test_point(&mut rng, n);
        let perm = permutation(&mut rng, n);
        cases.push((Some(t), x, perm));
    }
    let mut worst = 0.0_f64;
    for (trial, x, perm) in &cases {
        let sx = x.permuted(perm);
        let (a, b) = (phi.evaluate(x)?, phi.evaluate(&sx)?);
        let (ok, residual) = equal_values(a, b, tol.invariance, reference);
        if residual.is_finite() {
            worst = worst.max(residual);
        }
        if !ok {
            return Ok(Verdict::new(name, Outcome::Fail, cases.len() as u64, seed)
                .with_residual(residual)
                .with_witness(
                    witness_for(*trial)
                        .vector("X", x)
                        .vector("sigma X", &sx)
                        .scalar("phi(X)", a)
                        .scalar("phi(sigma X)", b),
                ));
        }
    }
    Ok(Verdict::new(name, Outcome::Pass, cases.len() as u64, seed).with_residual(worst))
}

const LAMBDAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// `φ(λX + (1-λ)Y) <= λφ(X) + (1-λ)φ(Y)`. Starts with `(e_0, -e_0)` at
/// `λ = 1/2`, then all pairs of probes, then random pairs.
pub fn check_convexity(
    phi: &Functional,
    space: SampleSpace,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "convexity";
    let space = phi.space_or(space)?;
    let reference = phi.reference_scale(space);
    let e0 = RandomVariable::indicator(space, &[0]);
    let mut cases: Vec<(Option<u64>, RandomVariable, RandomVariable, f64)> =
        vec![(None, e0.clone(), -&e0, 0.5)];
    let mut probes = phi.probes();
    probes.push(RandomVariable::zero(space));
    for (i, x) in probes.iter().enumerate() {
        for y in &probes[i + 1..] {
            for &l in &LAMBDAS {
                cases.push((None, x.clone(), y.clone(), l));
            }
        }
    }
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let x = test_point(&mut rng, space.n());
        let y = test_point(&mut rng, space.n());
        let l = LAMBDAS[rng.random_range(0..LAMBDAS.len())];
        cases.push((Some(t), x, y, l));
    }
    let mut worst = 0.0_f64;
    let mut finite_cases = 0u64;
    for (trial, x, y, l) in &cases {
        let (fx, fy) = (phi.evaluate(x)?, phi.evaluate(y)?);
        let rhs = l * fx + (1.0 - l) * fy;
        if !rhs.is_finite() {
            continue;
        }
        finite_cases += 1;
        let mid = x.scaled(*l).add_scaled(1.0 - l, y);
        let lhs = phi.evaluate(&mid)?;
        let excess = lhs - rhs;
        worst = worst.max(excess);
        let scale = lhs.abs().max(fx.abs()).max(fy.abs()).max(reference);
        if excess > 0.0 && !within(excess, tol.convexity, scale) {
            return Ok(Verdict::new(name, Outcome::Fail, cases.len() as u64, seed)
                .with_residual(excess)
                .with_witness(
                    witness_for(*trial)
                        .vector("X", x)
                        .vector("Y", y)
                        .scalar("lambda", *l)
                        .scalar("phi(X)", fx)
                        .scalar("phi(Y)", fy)
                        .scalar("phi(lambda X + (1 - lambda) Y)", lhs),
                ));
        }
    }
    Ok(Verdict::new(name, Outcome::Pass, cases.len() as u64, seed)
        .with_residual(worst.max(0.0))
        .with_note(format!(
            "{finite_cases} of {} cases had finite values",
            cases.len()
        )))
}

/// Fits the slope along `z` on the default grid and requires affinity.
fn affine_along(
    phi: &Functional,
    z: &RandomVariable,
    check: &str,
    tol: &Tolerances,
) -> Result<AffineFit> {
    let fit = affine_slope(phi, z, &DEFAULT_M_GRID).map_err(|e| match e {
        Error::NotAffine { m } => Error::precondition_with(
            check,
            format!("not affine along Z: phi(mZ) = +inf at m = {m}"),
            Witness::new().vector("Z", z).scalar("m", m),
        ),
        other => other,
    })?;
    if !fit.is_affine(tol.affinity) {
        return Err(Error::precondition_with(
            check,
            "not affine along Z",
            Witness::new()
                .vector("Z", z)
                .scalar("slope", fit.slope)
                .scalar("max_residual", fit.max_residual),
        ));
    }
    Ok(fit)
}

const M_STRUCTURED: [f64; 5] = [1.0, -1.0, 2.0, -2.0, 0.5];

/// `φ(X + mZ) = φ(X) + a m` with `a` the fitted slope along `Z` (or the
/// supplied one) for `X` with finite `φ(X)`.
pub fn check_translation_invariance_along(
    phi: &Functional,
    z: &RandomVariable,
    slope: Option<f64>,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "translation_invariance";
    let space = phi.space_or(z.space())?;
    let a = match slope {
        Some(a) => a,
        None => affine_along(phi, z, name, tol)?.slope,
    };
    let reference = phi.reference_scale(space);
    let mut cases: Vec<(Option<u64>, RandomVariable, f64)> = Vec::new();
    for (trial, x) in candidate_points(phi, space, 0, seed) {
        for m in M_STRUCTURED {
            cases.push((trial, x.clone(), m));
        }
    }
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let x = test_point(&mut rng, space.n());
        let m = rng.random_range(-5.0..=5.0);
        cases.push((Some(t), x, m));
    }
    let mut worst = 0.0_f64;
    for (trial, x, m) in &cases {
        let fx = phi.evaluate(x)?;
        if !fx.is_finite() {
            continue;
        }
        let shifted = phi.evaluate(&x.add_scaled(*m, z))?;
        let expected = fx + a * m;
        let (ok, residual) = equal_values(shifted, expected, tol.affinity, reference);
        if residual.is_finite() {
            worst = worst.max(residual);
        }
        if !ok {
            return Ok(Verdict::new(name, Outcome::Fail, cases.len() as u64, seed)
                .with_residual(residual)
                .with_slope(a)
                .with_witness(
                    witness_for(*trial)
                        .vector("X", x)
                        .vector("Z", z)
                        .scalar("m", *m)
                        .scalar("phi(X)", fx)
                        .scalar("phi(X + mZ)", shifted),
                ));
        }
    }
    Ok(Verdict::new(name, Outcome::Pass, cases.len() as u64, seed)
        .with_residual(worst)
        .with_slope(a))
}

/// A point where `φ(λX) != λφ(X)` for some `λ > 0`, if one turns up.
/// Points with nonzero finite values are tried first.
fn homogeneity_witness(
    phi: &Functional,
    space: SampleSpace,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Option<Witness>> {
    let reference = phi.reference_scale(space);
    let mut points = vec![
        (None, RandomVariable::constant(space, -1.0)),
        (None, RandomVariable::constant(space, 1.0)),
    ];
    points.extend(candidate_points(
        phi,
        space,
        trials.min(PREMISE_TRIALS),
        seed,
    ));
    let mut keyed = Vec::with_capacity(points.len());
    for (t, x) in points {
        let v = phi.evaluate(&x)?;
        keyed.push((v == 0.0 || !v.is_finite(), t, x, v));
    }
    keyed.sort_by_key(|k| k.0);
    for (_, trial, x, v) in keyed {
        for lambda in [2.0, 0.5, 3.0] {
            let scaled = phi.evaluate(&x.scaled(lambda))?;
            let (ok, _) = equal_values(scaled, lambda * v, tol.affinity, reference);
            if !ok {
                return Ok(Some(
                    witness_for(trial)
                        .vector("X", &x)
                        .scalar("lambda", lambda)
                        .scalar("phi(X)", v)
                        .scalar("phi(lambda X)", scaled),
                ));
            }
        }
    }
    Ok(None)
}

fn subadditivity_witness(
    phi: &Functional,
    space: SampleSpace,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Option<Witness>> {
    let reference = phi.reference_scale(space);
    let mut pairs: Vec<(Option<u64>, RandomVariable, RandomVariable)> = Vec::new();
    let probes = phi.probes();
    for (i, x) in probes.iter().enumerate() {
        for y in &probes[i..] {
            pairs.push((None, x.clone(), y.clone()));
        }
    }
    for t in 0..trials.min(PREMISE_TRIALS) {
        let mut rng = trial_rng(seed, t);
        pairs.push((
            Some(t),
            test_point(&mut rng, space.n()),
            test_point(&mut rng, space.n()),
        ));
    }
    for (trial, x, y) in pairs {
        let rhs = phi.evaluate(&x)? + phi.evaluate(&y)?;
        if !rhs.is_finite() {
            continue;
        }
        let lhs = phi.evaluate(&(&x + &y))?;
        let excess = lhs - rhs;
        if excess > 0.0
            && !within(
                excess,
                tol.convexity,
                lhs.abs().max(rhs.abs()).max(reference),
            )
        {
            return Ok(Some(
                witness_for(trial)
                    .vector("X", &x)
                    .vector("Y", &y)
                    .scalar("phi(X + Y)", lhs)
                    .scalar("phi(X) + phi(Y)", rhs),
            ));
        }
    }
    Ok(None)
}

/// For sublinear `φ` affine along each element of `s`, translation
/// invariance along every combination of `s`. A failure once the premises
/// hold is reported as [`Outcome::Inconsistent`].
pub fn check_sublinear_upgrade(
    phi: &Functional,
    s: &[RandomVariable],
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "sublinear_upgrade";
    let first = s
        .first()
        .ok_or_else(|| Error::Domain("S must contain at least one direction".into()))?;
    for z in s {
        check_same_space(first, z)?;
    }
    let space = phi.space_or(first.space())?;
    let phi0 = phi.evaluate(&RandomVariable::zero(space))?;
    if !within(phi0.abs(), tol.affinity, phi.reference_scale(space)) {
        return Err(Error::precondition(
            name,
            format!("phi(0) = {phi0}; sublinear functionals vanish at 0"),
        ));
    }
    if let Some(w) = homogeneity_witness(phi, space, trials, seed, tol)? {
        return Err(Error::precondition_with(
            name,
            "not positively homogeneous",
            w,
        ));
    }
    if let Some(w) = subadditivity_witness(phi, space, trials, seed, tol)? {
        return Err(Error::precondition_with(name, "not subadditive", w));
    }
    let slopes = s
        .iter()
        .map(|z| affine_along(phi, z, name, tol).map(|f| f.slope))
        .collect::<Result<Vec<f64>>>()?;
    let reference = phi.reference_scale(space);
    let mut worst = 0.0_f64;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let mut v = RandomVariable::zero(space);
        let mut a = 0.0;
        for (z, slope) in s.iter().zip(&slopes) {
            let c = rng.random_range(-3.0..=3.0);
            v = v.add_scaled(c, z);
            a += c * slope;
        }
        let x = test_point(&mut rng, space.n());
        let m = rng.random_range(-5.0..=5.0);
        let fx = phi.evaluate(&x)?;
        if !fx.is_finite() {
            continue;
        }
        let lhs = phi.evaluate(&x.add_scaled(m, &v))?;
        let (ok, residual) = equal_values(lhs, fx + a * m, tol.affinity, reference);
        if residual.is_finite() {
            worst = worst.max(residual);
        }
        if !ok {
            return Ok(Verdict::new(name, Outcome::Inconsistent, t + 1, seed)
                .with_residual(residual)
                .with_witness(
                    Witness::at_trial(t)
                        .vector("X", &x)
                        .vector("V", &v)
                        .scalar("m", m)
                        .scalar("slope", a)
                        .scalar("phi(X)", fx)
                        .scalar("phi(X + mV)", lhs),
                ));
        }
    }
    Ok(Verdict::new(name, Outcome::Pass, trials, seed).with_residual(worst))
}

fn require_claims(phi: &Functional, check: &str) -> Result<()> {
    let c = phi.claims();
    if !c.convex || !c.law_invariant {
        return Err(Error::precondition(
            check,
            format!("{} is not claimed convex and law invariant", phi.label()),
        ));
    }
    Ok(())
}

/// Re-verifies the convexity and law-invariance claims by falsification.
pub fn verify_premises(
    phi: &Functional,
    space: SampleSpace,
    seed: u64,
    tol: &Tolerances,
    check: &str,
) -> Result<()> {
    require_claims(phi, check)?;
    for v in [
        check_law_invariance(phi, space, PREMISE_TRIALS, seed, tol)?,
        check_convexity(phi, space, PREMISE_TRIALS, seed, tol)?,
    ] {
        if v.outcome != Outcome::Pass {
            return Err(Error::precondition_with(
                check,
                format!("{} check failed", v.name),
                v.witness.unwrap_or_default(),
            ));
        }
    }
    Ok(())
}

/// Collapse classification along a nonconstant `z`, after re-verifying
/// that `φ` is convex and law invariant.
pub fn collapse_verdict(
    phi: &Functional,
    z: &RandomVariable,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let space = phi.space_or(z.space())?.require_nontrivial()?;
    if z.is_constant(tol.constant) {
        return Err(Error::precondition("collapse", "Z must be nonconstant"));
    }
    verify_premises(phi, space, seed, tol, "collapse")?;
    collapse_verdict_prechecked(phi, z, trials, seed, tol)
}

/// [`collapse_verdict`] without re-running the premise falsifiers; the
/// convex and law-invariant claims are still required.
pub fn collapse_verdict_prechecked(
    phi: &Functional,
    z: &RandomVariable,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "collapse";
    let space = phi.space_or(z.space())?.require_nontrivial()?;
    if z.is_constant(tol.constant) {
        return Err(Error::precondition(name, "Z must be nonconstant"));
    }
    require_claims(phi, name)?;
    let fit = match affine_slope(phi, z, &DEFAULT_M_GRID) {
        Ok(fit) => fit,
        Err(Error::NotAffine { m }) => {
            return Ok(Verdict::new(
                name,
                Outcome::NoAffineDirection,
                DEFAULT_M_GRID.len() as u64,
                seed,
            )
            .with_residual(f64::INFINITY)
            .with_witness(Witness::new().vector("Z", z).scalar("m", m))
            .with_note("phi(mZ) is infinite on the grid"))
        }
        Err(e) => return Err(e),
    };
    if !fit.is_affine(tol.affinity) {
        return Ok(Verdict::new(
            name,
            Outcome::NoAffineDirection,
            DEFAULT_M_GRID.len() as u64,
            seed,
        )
        .with_residual(fit.max_residual)
        .with_slope(fit.slope)
        .with_witness(
            Witness::new()
                .vector("Z", z)
                .scalar("phi(Z) + phi(-Z) - 2 phi(0)", symmetric_spread(phi, z)?),
        ));
    }
    let phi0 = phi.evaluate(&RandomVariable::zero(space))?;
    let reference = phi.reference_scale(space);
    let mean_tol = tol.mean * (1.0 + max_abs(z.values()));
    let ez = z.expectation();
    let points = candidate_points(phi, space, trials, seed);
    if ez.abs() > mean_tol {
        let a = fit.slope / ez;
        return verify_identity(
            name,
            &points,
            seed,
            Outcome::CollapseToMean,
            Some(a),
            (tol.collapse, reference),
            |x| {
                let v = phi.evaluate(x)?;
                let target = a * x.expectation() + phi0;
                Ok((
                    v,
                    target,
                    v.abs().max((a * x.expectation()).abs()).max(phi0.abs()),
                ))
            },
        );
    }
    let through = verify_identity(
        name,
        &points,
        seed,
        Outcome::CollapseThroughMean,
        None,
        (tol.collapse, reference),
        |x| {
            let v = phi.evaluate(x)?;
            let target = phi.evaluate(&RandomVariable::constant(space, x.expectation()))?;
            Ok((v, target, v.abs().max(target.abs()).max(phi0.abs())))
        },
    )?;
    if through.outcome != Outcome::CollapseThroughMean {
        return Ok(through);
    }
    // Affine along the constants as well: refine to an affine function of the mean.
    let one = RandomVariable::constant(space, 1.0);
    match affine_slope(phi, &one, &DEFAULT_M_GRID) {
        Ok(f) if f.is_affine(tol.affinity) => {
            let a = f.slope;
            verify_identity(
                name,
                &points,
                seed,
                Outcome::CollapseToMean,
                Some(a),
                (tol.collapse, reference),
                |x| {
                    let v = phi.evaluate(x)?;
                    let target = a * x.expectation() + phi0;
                    Ok((
                        v,
                        target,
                        v.abs().max((a * x.expectation()).abs()).max(phi0.abs()),
                    ))
                },
            )
        }
        Ok(_) | Err(Error::NotAffine { .. }) => Ok(through),
        Err(e) => Err(e),
    }
}

/// Checks `value == target` within the collapse tolerance on every point;
/// `eval` returns `(value, target, scale)`.
fn verify_identity(
    name: &str,
    points: &[(Option<u64>, RandomVariable)],
    seed: u64,
    success: Outcome,
    slope: Option<f64>,
    (rel, reference): (f64, f64),
    eval: impl Fn(&RandomVariable) -> Result<(f64, f64, f64)> + Sync,
) -> Result<Verdict> {
    let results = points
        .par_iter()
        .map(|(_, x)| eval(x))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0_f64;
    for ((trial, x), (v, target, scale)) in points.iter().zip(results) {
        let residual = if v == target { 0.0 } else { (v - target).abs() };
        if residual.is_finite() {
            worst = worst.max(residual);
        }
        if !within(residual, rel, scale.max(reference)) {
            let mut verdict = Verdict::new(name, Outcome::Inconsistent, points.len() as u64, seed)
                .with_residual(residual)
                .with_witness(
                    witness_for(*trial)
                        .vector("X", x)
                        .scalar("phi(X)", v)
                        .scalar("expected", target),
                );
            if let Some(a) = slope {
                verdict = verdict.with_slope(a);
            }
            return Ok(verdict);
        }
    }
    let mut verdict = Verdict::new(name, success, points.len() as u64, seed).with_residual(worst);
    if let Some(a) = slope {
        verdict = verdict.with_slope(a);
    }
    Ok(verdict)
}

/// [`collapse_verdict`] with the additional premise that `φ` is cash
/// additive, i.e. translation invariant along the constants. Refuses when
/// that premise fails.
pub fn collapse_verdict_cash(
    phi: &Functional,
    z: &RandomVariable,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "collapse_cash";
    let space = phi.space_or(z.space())?;
    let one = RandomVariable::constant(space, 1.0);
    let ti =
        check_translation_invariance_along(phi, &one, None, trials.min(PREMISE_TRIALS), seed, tol)
            .map_err(|e| match e {
                Error::Precondition { witness, .. } => Error::Precondition {
                    check: name.into(),
                    reason: "not cash additive: not affine along the constants".into(),
                    witness,
                },
                other => other,
            })?;
    if ti.outcome != Outcome::Pass {
        return Err(Error::precondition_with(
            name,
            "not cash additive",
            ti.witness.unwrap_or_default(),
        ));
    }
    let mut v = collapse_verdict(phi, z, trials, seed, tol)?;
    v.name = name.into();
    Ok(v)
}

/// `φ(Z) + φ(-Z) - 2φ(0)`, zero exactly when `m -> φ(mZ)` can be affine
/// on `{-1, 0, 1}`.
pub fn symmetric_spread(phi: &Functional, z: &RandomVariable) -> Result<f64> {
    let zero = RandomVariable::zero(z.space());
    Ok(phi.evaluate(z)? + phi.evaluate(&-z)? - 2.0 * phi.evaluate(&zero)?)
}

/// Structured directions: every subset indicator for small spaces and
/// leading-`k` indicators otherwise (representatives of every indicator
/// law), plus all two-point differences.
pub fn structured_directions(space: SampleSpace) -> Vec<RandomVariable> {
    let n = space.n();
    let mut out = Vec::new();
    if n <= ALL_SUBSETS_ATOMS {
        for mask in 1usize..(1 << n) - 1 {
            let atoms: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            out.push(RandomVariable::indicator(space, &atoms));
        }
    } else {
        for k in 1..n {
            out.push(RandomVariable::indicator(
                space,
                &(0..k).collect::<Vec<_>>(),
            ));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v[j] = -1.0;
            out.push(RandomVariable::from_finite(v));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadScan {
    /// Smallest `φ(Z) + φ(-Z) - 2φ(0)` seen.
    pub min_spread: f64,
    pub argmin: RandomVariable,
    pub directions: u64,
}

/// Minimum symmetric spread over the structured directions and `trials`
/// random nonconstant directions. A positive minimum means no tested
/// direction is affine.
pub fn spread_scan(
    phi: &Functional,
    space: SampleSpace,
    trials: u64,
    seed: u64,
) -> Result<SpreadScan> {
    let space = phi.space_or(space)?.require_nontrivial()?;
    let mut dirs = structured_directions(space);
    for t in 0..trials {
        dirs.push(nonconstant_point(&mut trial_rng(seed, t), space.n()));
    }
    let spreads = dirs
        .par_iter()
        .map(|z| symmetric_spread(phi, z))
        .collect::<Result<Vec<f64>>>()?;
    let (idx, &min_spread) = spreads
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("at least one direction");
    Ok(SpreadScan {
        min_spread,
        argmin: dirs[idx].clone(),
        directions: dirs.len() as u64,
    })
}

/// Searches for a nonconstant `Z` with `E_c[Z] + E_c[-Z] = 0`. Finding one
/// forces `c = P`; otherwise no frictionless risky payoff exists among the
/// tested directions.
pub fn choquet_collapse_scan(
    c: &CapacitySource,
    space: SampleSpace,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "choquet_collapse";
    let space = match c.atoms() {
        Some(n) if n != space.n() => {
            return Err(Error::SpaceMismatch {
                left: n,
                right: space.n(),
            })
        }
        _ => space.require_nontrivial()?,
    };
    let sub = c.submodularity(space.n(), tol.submodular)?;
    if sub.outcome != Outcome::Pass {
        return Err(Error::precondition_with(
            name,
            "capacity is not submodular",
            sub.witness.unwrap_or_default(),
        ));
    }
    let mut dirs: Vec<(Option<u64>, RandomVariable)> = structured_directions(space)
        .into_iter()
        .map(|z| (None, z))
        .collect();
    for t in 0..trials {
        dirs.push((
            Some(t),
            nonconstant_point(&mut trial_rng(seed, t), space.n()),
        ));
    }
    let spreads = dirs
        .par_iter()
        .map(|(_, z)| Ok(c.choquet(z)? + c.choquet(&-z)?))
        .collect::<Result<Vec<f64>>>()?;
    let total = dirs.len() as u64;
    let hit = dirs
        .iter()
        .zip(&spreads)
        .find(|((_, z), s)| **s <= tol.spread * max_abs(z.values()));
    if let Some(((trial, z), s)) = hit {
        let distance = c.distance_to_probability(space.n());
        let outcome = if distance <= tol.spread {
            Outcome::Pass
        } else {
            Outcome::Inconsistent
        };
        return Ok(Verdict::new(name, outcome, total, seed)
            .with_residual(distance)
            .with_witness(
                witness_for(*trial)
                    .vector("Z", z)
                    .scalar("E_c[Z] + E_c[-Z]", *s)
                    .scalar("max |c(E) - P(E)|", distance),
            ));
    }
    let (idx, min) = spreads
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("at least one direction");
    Ok(Verdict::new(name, Outcome::NoAffineDirection, total, seed)
        .with_residual(*min)
        .with_witness(
            witness_for(dirs[idx].0)
                .vector("Z", &dirs[idx].1)
                .scalar("min spread", *min),
        )
        .with_note(format!(
            "no frictionless risky payoff found in {total} directions"
        )))
}

/// If a payoff with nonzero mean is frictionless under `π`, every payoff is.
pub fn pricing_collapse(
    pi: &Functional,
    z: &RandomVariable,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "pricing_collapse";
    let space = pi.space_or(z.space())?;
    require_claims(pi, name)?;
    let fr = is_frictionless(pi, z, &DEFAULT_LAMBDA_GRID, tol.frictionless)?;
    if fr.outcome != Outcome::Pass {
        return Ok(
            Verdict::new(name, Outcome::NoAffineDirection, fr.trials, seed)
                .with_residual(fr.residual())
                .with_witness(fr.witness.unwrap_or_default())
                .with_note("Z is not frictionless"),
        );
    }
    if z.expectation().abs() <= tol.mean * (1.0 + max_abs(z.values())) {
        return Err(Error::precondition(name, "E[Z] must be nonzero"));
    }
    let mut v = collapse_verdict(pi, z, trials, seed, tol)?;
    v.name = name.into();
    if v.outcome != Outcome::CollapseToMean {
        v.outcome = Outcome::Inconsistent;
        return Ok(v.with_note("Z is frictionless but phi did not collapse to the mean"));
    }
    for t in 0..trials {
        let x = test_point(&mut trial_rng(seed, t), space.n());
        let f = is_frictionless(pi, &x, &DEFAULT_LAMBDA_GRID, tol.frictionless)?;
        if f.outcome != Outcome::Pass {
            let residual = f.residual();
            let w = f.witness.unwrap_or_default();
            return Ok(Verdict::new(name, Outcome::Inconsistent, t + 1, seed)
                .with_residual(residual)
                .with_witness(Witness {
                    trial: Some(t),
                    ..w
                }));
        }
    }
    v.outcome = Outcome::Pass;
    Ok(v.with_note(format!(
        "every one of {trials} random payoffs is frictionless"
    )))
}

/// For an `S`-additive convex law-invariant `ρ` with risky `S`:
/// `ρ(X) = (S0 / E[S1]) E[-X] + ρ(0)`.
pub fn risk_collapse(
    rho: &Functional,
    asset: &EligibleAsset,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "risk_collapse";
    let s1 = asset.payoff();
    let s0 = asset.price();
    let space = rho.space_or(s1.space())?.require_nontrivial()?;
    if !asset.is_risky(tol.constant) {
        return Err(Error::precondition(
            name,
            "S1 is constant (risk-free asset)",
        ));
    }
    verify_premises(rho, space, seed, tol, name)?;
    let reference = rho.reference_scale(space);
    for t in 0..trials.min(PREMISE_TRIALS) {
        let mut rng = trial_rng(seed, t);
        let x = test_point(&mut rng, space.n());
        let m = rng.random_range(-5.0..=5.0);
        let lhs = rho.evaluate(&x.add_scaled(m, s1))?;
        let rhs = rho.evaluate(&x)? - m * s0;
        let (ok, _) = equal_values(lhs, rhs, tol.s_additivity, reference);
        if !ok {
            return Err(Error::precondition_with(
                name,
                "not S-additive",
                Witness::at_trial(t)
                    .vector("X", &x)
                    .scalar("m", m)
                    .scalar("rho(X + m S1)", lhs)
                    .scalar("rho(X) - m S0", rhs),
            ));
        }
    }
    let es1 = s1.expectation();
    let a = s0 / es1;
    let rho0 = rho.evaluate(&RandomVariable::zero(space))?;
    let points = candidate_points(rho, space, trials, seed);
    let mut v = verify_identity(
        name,
        &points,
        seed,
        Outcome::Pass,
        Some(a),
        (tol.collapse, reference),
        |x| {
            let v = rho.evaluate(x)?;
            let target = -a * x.expectation() + rho0;
            Ok((v, target, v.abs().max(target.abs()).max(rho0.abs())))
        },
    )?;
    if v.outcome == Outcome::Pass && rho.claims().cash_additive == Some(SignConvention::RiskMeasure)
    {
        let gap = (es1 - s0).abs();
        if !within(gap, tol.s_additivity, s0) {
            v.outcome = Outcome::Inconsistent;
            v = v
                .with_witness(Witness::new().scalar("E[S1]", es1).scalar("S0", s0))
                .with_note("cash-additive rho requires E[S1] = S0");
        }
    }
    Ok(v)
}

/// Either `ρ = E[-·]` (alternative (i), reported as `CollapseToMean` with
/// slope `-1`) or `ρ` is strongly relevant (alternative (ii), `Pass`).
pub fn relevance_dichotomy(
    rho: &Functional,
    space: SampleSpace,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "relevance_dichotomy";
    let space = rho.space_or(space)?.require_nontrivial()?;
    let claims = rho.claims();
    let minus_one = rho.evaluate(&RandomVariable::constant(space, -1.0))?;
    let refuse = |reason: String, w: Option<Witness>| {
        let w = w.unwrap_or_default().scalar("rho(-1)", minus_one);
        Err(Error::precondition_with(name, reason, w))
    };
    let homogeneity = homogeneity_witness(rho, space, trials, seed, tol)?;
    if !claims.sublinear || homogeneity.is_some() {
        return refuse(
            format!("{} is not positively homogeneous", rho.label()),
            homogeneity,
        );
    }
    if !claims.law_invariant || claims.cash_additive != Some(SignConvention::RiskMeasure) {
        return refuse(
            format!(
                "{} is not claimed law invariant and cash additive",
                rho.label()
            ),
            None,
        );
    }
    let one = RandomVariable::constant(space, 1.0);
    let ti = check_translation_invariance_along(
        rho,
        &one,
        Some(-1.0),
        trials.min(PREMISE_TRIALS),
        seed,
        tol,
    )?;
    if ti.outcome != Outcome::Pass {
        return refuse("cash additivity spot check failed".into(), ti.witness);
    }
    let points = candidate_points(rho, space, trials, seed);
    let reference = rho.reference_scale(space);
    let mut worst = 0.0_f64;
    let mut is_mean = true;
    for (_, x) in &points {
        let v = rho.evaluate(x)?;
        let target = -x.expectation();
        let (ok, residual) = equal_values(v, target, tol.collapse, reference);
        worst = worst.max(residual);
        if !ok {
            is_mean = false;
            break;
        }
    }
    if is_mean {
        return Ok(
            Verdict::new(name, Outcome::CollapseToMean, points.len() as u64, seed)
                .with_residual(worst)
                .with_slope(-1.0)
                .with_note("alternative (i): rho = E[-X]"),
        );
    }
    let sr = is_strongly_relevant(rho, space, trials, seed)?;
    let mut v = Verdict::new(name, Outcome::Pass, sr.trials, seed).with_residual(0.0);
    if sr.outcome == Outcome::Pass {
        v = v.with_note(format!(
            "alternative (ii): strongly relevant, {}",
            sr.note.unwrap_or_default()
        ));
    } else {
        v.outcome = Outcome::Inconsistent;
        v.max_residual = sr.max_residual;
        v.witness = sr.witness;
        v = v.with_note("rho differs from E[-X] yet is not strongly relevant");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::DistortionFunction;
    use crate::functional::{
        make_choquet, make_entropic, make_example_affine_not_ti, make_expected_shortfall,
        make_final_remark_rho, make_mean_affine, make_s_additive, Claims, DEFAULT_BRACKET,
    };

    fn rv(v: &[f64]) -> RandomVariable {
        RandomVariable::new(v.to_vec()).unwrap()
    }

    fn space(n: usize) -> SampleSpace {
        SampleSpace::new(n).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn mean_square() -> Functional {
        Functional::custom(
            "mean_square",
            Claims {
                convex: true,
                law_invariant: true,
                ..Claims::default()
            },
            |x| x.expectation().powi(2),
        )
    }

    fn strictly_concave() -> DistortionFunction {
        DistortionFunction::sampled(|u| 1.0 - (1.0 - u) * (1.0 - u), 16).unwrap()
    }

    #[test]
    fn law_invariance_examples() {
        let e = make_entropic(1.0).unwrap();
        assert_eq!(
            check_law_invariance(&e, space(5), 100, 0, &tol())
                .unwrap()
                .outcome,
            Outcome::Pass
        );
        let first = Functional::custom("first", Claims::default(), |x| x.values()[0]);
        let v = check_law_invariance(&first, space(3), 100, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Fail);
        let w = v.witness.unwrap();
        assert_eq!(w.get_vector("X").unwrap(), rv(&[1.0, 0.0, 0.0]));
        assert_eq!(w.get_vector("sigma X").unwrap(), rv(&[0.0, 1.0, 0.0]));
        let c = Functional::custom("const", Claims::default(), |_| 3.0);
        assert_eq!(
            check_law_invariance(&c, space(3), 100, 0, &tol())
                .unwrap()
                .outcome,
            Outcome::Pass
        );
        assert!(check_law_invariance(&c, SampleSpace::new(1).unwrap(), 10, 0, &tol()).is_err());
    }

    #[test]
    fn convexity_examples() {
        let es = make_expected_shortfall(0.3).unwrap();
        assert_eq!(
            check_convexity(&es, space(6), 300, 0, &tol())
                .unwrap()
                .outcome,
            Outcome::Pass
        );
        let concave = Functional::custom("-|X|^2", Claims::default(), |x| {
            -x.values().iter().map(|v| v * v).sum::<f64>()
        });
        let v = check_convexity(&concave, space(3), 10, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Fail);
        let w = v.witness.unwrap();
        assert_eq!(w.get_scalar("lambda"), Some(0.5));
        assert_eq!(w.get_vector("X").unwrap(), -&w.get_vector("Y").unwrap());
        let ex = make_example_affine_not_ti(rv(&[1.0, 0.0, 0.0]), rv(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(
            check_convexity(&ex, space(3), 300, 0, &tol())
                .unwrap()
                .outcome,
            Outcome::Pass
        );
    }

    #[test]
    fn translation_invariance_examples() {
        let one = rv(&[1.0; 4]);
        let es = make_expected_shortfall(0.25).unwrap();
        let v = check_translation_invariance_along(&es, &one, None, 200, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        assert!((v.slope.unwrap() + 1.0).abs() < 1e-12);

        let w = rv(&[1.0, 0.0, 0.0]);
        let z = rv(&[0.0, 1.0, 0.0]);
        let ex = make_example_affine_not_ti(w.clone(), z.clone()).unwrap();
        let v = check_translation_invariance_along(&ex, &z, None, 100, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Fail);
        assert_eq!(v.residual(), 1.0);
        let wit = v.witness.unwrap();
        assert_eq!(wit.get_vector("X").unwrap(), w);
        assert_eq!(wit.get_scalar("m"), Some(1.0));

        let f = make_mean_affine(2.5, -1.0).unwrap();
        let v = check_translation_invariance_along(
            &f,
            &rv(&[3.0, -1.0, 0.5, 0.0]),
            None,
            200,
            0,
            &tol(),
        )
        .unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
    }

    #[test]
    fn sublinear_upgrade_examples() {
        let p = make_choquet(CapacitySource::Distortion(DistortionFunction::identity()));
        let v = check_sublinear_upgrade(&p, &[rv(&[1.0, 2.0, -1.0])], 200, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        let es = make_expected_shortfall(0.5).unwrap();
        let v = check_sublinear_upgrade(&es, &[rv(&[1.0; 3])], 200, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        let w = rv(&[1.0, 0.0, 0.0]);
        let z = rv(&[0.0, 1.0, 0.0]);
        let ex = make_example_affine_not_ti(w.clone(), z.clone()).unwrap();
        match check_sublinear_upgrade(&ex, std::slice::from_ref(&z), 200, 0, &tol()) {
            Err(Error::Precondition {
                witness: Some(wit), ..
            }) => {
                assert_eq!(wit.get_vector("X").unwrap(), &w + &z);
                assert_eq!(wit.get_scalar("phi(X)"), Some(1.0));
                assert_eq!(wit.get_scalar("phi(lambda X)"), Some(f64::INFINITY));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn collapse_examples() {
        let f = make_mean_affine(2.0, 1.0).unwrap();
        let v = collapse_verdict(&f, &rv(&[1.0, 0.0, 0.0]), 300, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::CollapseToMean);
        assert!((v.slope.unwrap() - 2.0).abs() < 1e-12 && v.residual() <= 1e-9);

        let e = make_entropic(1.0).unwrap();
        let v = collapse_verdict(&e, &rv(&[1.0, 0.0]), 300, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::NoAffineDirection);

        let v = collapse_verdict(&mean_square(), &rv(&[1.0, -1.0, 0.0]), 300, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::CollapseThroughMean);
        assert!(v.residual() <= 1e-10);
        assert!(matches!(
            collapse_verdict_cash(&mean_square(), &rv(&[1.0, -1.0, 0.0]), 300, 0, &tol()),
            Err(Error::Precondition { .. })
        ));
        assert!(matches!(
            collapse_verdict(&f, &rv(&[2.0; 3]), 10, 0, &tol()),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn zero_mean_direction_refines_with_cash_additivity() {
        let es1 = make_expected_shortfall(1.0).unwrap();
        let v = collapse_verdict(&es1, &rv(&[1.0, -1.0, 0.0]), 200, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::CollapseToMean);
        assert!((v.slope.unwrap() + 1.0).abs() < 1e-12);
        let v = collapse_verdict_cash(&es1, &rv(&[1.0, -1.0, 0.0]), 200, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::CollapseToMean);
    }

    #[test]
    fn choquet_scan_examples() {
        let s = space(4);
        let p = CapacitySource::Distortion(DistortionFunction::identity());
        assert_eq!(
            choquet_collapse_scan(&p, s, 100, 0, &tol())
                .unwrap()
                .outcome,
            Outcome::Pass
        );
        let c = CapacitySource::Distortion(strictly_concave());
        let v = choquet_collapse_scan(&c, s, 2000, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::NoAffineDirection);
        assert!(v.residual() > 0.0);
        let bumped = DistortionFunction::new(vec![[0.0, 0.0], [0.5, 0.55], [1.0, 1.0]]).unwrap();
        let v =
            choquet_collapse_scan(&CapacitySource::Distortion(bumped), s, 500, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::NoAffineDirection);
        let square = DistortionFunction::sampled(|u| u * u, 4).unwrap();
        assert!(matches!(
            choquet_collapse_scan(&CapacitySource::Distortion(square), s, 10, 0, &tol()),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn pricing_examples() {
        let z = rv(&[1.0, 3.0, 0.0, 2.0]);
        let f = make_mean_affine(1.5, 0.0).unwrap();
        let v = pricing_collapse(&f, &z, 200, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        assert!((v.slope.unwrap() - 1.5).abs() < 1e-12);
        let pi = make_choquet(CapacitySource::Distortion(strictly_concave()));
        assert_eq!(
            pricing_collapse(&pi, &z, 200, 0, &tol()).unwrap().outcome,
            Outcome::NoAffineDirection
        );
        let id = make_choquet(CapacitySource::Distortion(DistortionFunction::identity()));
        let v = pricing_collapse(&id, &z, 200, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        assert!((v.slope.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn risk_collapse_examples() {
        let asset = EligibleAsset::new(2.0, rv(&[1.0, 3.0])).unwrap();
        let rho = make_s_additive(
            make_mean_affine(-1.0, 0.0).unwrap(),
            asset.clone(),
            DEFAULT_BRACKET,
        )
        .unwrap();
        let v = risk_collapse(&rho, &asset, 200, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        assert!((v.slope.unwrap() - 1.0).abs() < 1e-12 && v.residual() <= 1e-6);

        let asset4 = EligibleAsset::new(1.0, rv(&[1.0, 3.0, 0.0, 2.0])).unwrap();
        let es = make_expected_shortfall(0.5).unwrap();
        assert!(matches!(
            risk_collapse(&es, &asset4, 200, 0, &tol()),
            Err(Error::Precondition { .. })
        ));
        let riskless = EligibleAsset::new(1.0, rv(&[1.0, 1.0])).unwrap();
        assert!(matches!(
            risk_collapse(&rho, &riskless, 10, 0, &tol()),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn relevance_dichotomy_examples() {
        let es = make_expected_shortfall(0.3).unwrap();
        let v = relevance_dichotomy(&es, space(10), 1000, 0, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        let m = make_mean_affine(-1.0, 0.0).unwrap();
        let v = relevance_dichotomy(&m, space(5), 200, 0, &tol()).unwrap();
        assert_eq!((v.outcome, v.residual()), (Outcome::CollapseToMean, 0.0));
        match relevance_dichotomy(&make_final_remark_rho(), space(4), 100, 0, &tol()) {
            Err(Error::Precondition {
                witness: Some(w), ..
            }) => assert_eq!(w.get_scalar("rho(-1)"), Some(0.0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spread_scan_positive_for_non_mean() {
        let es = make_expected_shortfall(0.5).unwrap();
        let scan = spread_scan(&es, space(6), 500, 0).unwrap();
        assert!(scan.min_spread > 0.0);
        let m = make_mean_affine(2.0, 0.0).unwrap();
        assert!(spread_scan(&m, space(6), 50, 0).unwrap().min_spread.abs() < 1e-14);
    }

    #[test]
    fn scaling_preserves_outcomes() {
        let z = rv(&[1.0, -2.0, 0.0, 4.0]);
        for f in [
            make_entropic(1.0).unwrap(),
            make_mean_affine(2.0, 1.0).unwrap(),
        ] {
            let base = collapse_verdict(&f, &z, 100, 3, &tol()).unwrap();
            for lambda in [1e-6, 0.5, 7.0, 1e6] {
                let v = collapse_verdict(&f.scaled(lambda).unwrap(), &z, 100, 3, &tol()).unwrap();
                assert_eq!(v.outcome, base.outcome, "lambda = {lambda}");
            }
        }
    }
}
