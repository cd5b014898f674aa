//! Convex conjugates `φ*(Y) = sup_X {E[XY] - φ(X)}`, biconjugation, and the
//! affine representation `φ(Z) = E[ZY] + φ(0)` along subspaces.
//!
//! Built-in functionals have closed-form conjugates. Everything else goes
//! through multi-start gradient ascent, whose result is a lower bound unless
//! a divergent ray certifies `+∞`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{Capacity, CapacitySource, DistortionFunction, MAX_SUBMODULAR_ATOMS};
use crate::error::{Error, Result};
use crate::functional::{Functional, Kind};
use crate::numeric::{fsum, ExtReal};
use crate::quantile::rearrangement_bounds;
use crate::rng::{test_point, trial_rng};
use crate::space::{check_same_space, RandomVariable};
use crate::tolerance::{within, Tolerances};
use crate::verdict::{Outcome, Verdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConjugateStatus {
    /// Closed form.
    Exact,
    /// Best value found by ascent; a lower bound.
    Numerical,
    /// `+∞`, certified by a ray along which the objective exceeded the
    /// divergence threshold.
    UnboundedDetected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugateResult {
    pub value: ExtReal,
    pub status: ConjugateStatus,
    pub iterations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugateMethod {
    ClosedForm,
    Ascent,
}

pub fn conjugate(
    phi: &Functional,
    y: &RandomVariable,
    method: ConjugateMethod,
) -> Result<ConjugateResult> {
    conjugate_with(phi, y, method, &Tolerances::default())
}

pub fn conjugate_with(
    phi: &Functional,
    y: &RandomVariable,
    method: ConjugateMethod,
    tol: &Tolerances,
) -> Result<ConjugateResult> {
    if let Some(n) = phi.atoms() {
        if n != y.n() {
            return Err(Error::SpaceMismatch {
                left: n,
                right: y.n(),
            });
        }
    }
    match method {
        ConjugateMethod::ClosedForm => {
            let value = closed_form(phi, y, tol)?.ok_or_else(|| {
                Error::Unsupported(format!(
                    "no closed-form conjugate for {}; use ascent",
                    phi.label()
                ))
            })?;
            if value.is_finite() {
                return Ok(ConjugateResult {
                    value: ExtReal(value),
                    status: ConjugateStatus::Exact,
                    iterations: 0,
                });
            }
            let zero = RandomVariable::zero(y.space());
            let certified = ray_certificate(phi, y, &zero, tol)?.is_some();
            Ok(ConjugateResult {
                value: ExtReal::INFINITY,
                status: if certified {
                    ConjugateStatus::UnboundedDetected
                } else {
                    ConjugateStatus::Exact
                },
                iterations: 0,
            })
        }
        ConjugateMethod::Ascent => ascent(phi, y, tol),
    }
}

/// Closed form when available, ascent otherwise.
pub fn conjugate_auto(
    phi: &Functional,
    y: &RandomVariable,
    tol: &Tolerances,
) -> Result<ConjugateResult> {
    match conjugate_with(phi, y, ConjugateMethod::ClosedForm, tol) {
        Err(Error::Unsupported(_)) => conjugate_with(phi, y, ConjugateMethod::Ascent, tol),
        other => other,
    }
}

fn is_density(d: &[f64], tol: f64) -> bool {
    let mean = fsum(d.iter().copied()) / d.len() as f64;
    d.iter().all(|&v| v >= -tol) && (mean - 1.0).abs() <= tol
}

/// `D` lies in the core of `g∘P`: `E[D] = 1` and the top-`k` mass of `D`,
/// the upper rearrangement bound against a `k`-atom indicator, is at most
/// `g(k/n)`.
fn in_distortion_core(d: &RandomVariable, g: impl Fn(f64) -> f64, tol: f64) -> Result<bool> {
    let n = d.n();
    if (d.expectation() - 1.0).abs() > tol {
        return Ok(false);
    }
    for k in 1..n {
        let ind = RandomVariable::indicator(d.space(), &(0..k).collect::<Vec<_>>());
        let top = rearrangement_bounds(&ind, d)?.hi;
        if top > g(k as f64 / n as f64) + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

fn in_table_core(d: &RandomVariable, c: &Capacity, tol: f64) -> bool {
    if (d.expectation() - 1.0).abs() > tol {
        return false;
    }
    let n = d.n();
    let v = d.values();
    let mut mass = vec![0.0; 1 << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        mass[mask] = mass[mask & (mask - 1)] + v[low] / n as f64;
        if mass[mask] > c.value(mask) + tol {
            return false;
        }
    }
    true
}

fn closed_form(phi: &Functional, y: &RandomVariable, tol: &Tolerances) -> Result<Option<f64>> {
    let t = tol.dual_membership;
    let inf = f64::INFINITY;
    Ok(match phi.kind() {
        Kind::MeanAffine { a, b } => {
            let at_gradient = y
                .values()
                .iter()
                .all(|v| (v - a).abs() <= t * (1.0 + a.abs()));
            Some(if at_gradient { -b } else { inf })
        }
        Kind::ExpectedShortfall { alpha } => {
            let alpha = *alpha;
            let d = -y;
            Some(if in_distortion_core(&d, |u| (u / alpha).min(1.0), t)? {
                0.0
            } else {
                inf
            })
        }
        Kind::Choquet(CapacitySource::Distortion(g)) => {
            if !g.is_concave(1e-12) {
                return Ok(None);
            }
            Some(if in_distortion_core(y, |u| g.eval(u), t)? {
                0.0
            } else {
                inf
            })
        }
        Kind::Choquet(CapacitySource::Table(c)) => {
            if c.n() > MAX_SUBMODULAR_ATOMS
                || crate::capacity::is_submodular(c, tol.submodular)?.outcome != Outcome::Pass
            {
                return Ok(None);
            }
            Some(if in_table_core(y, c, t) { 0.0 } else { inf })
        }
        Kind::Entropic { theta } => {
            let d: Vec<f64> = y.values().iter().map(|v| -v).collect();
            Some(if is_density(&d, t) {
                let n = d.len() as f64;
                fsum(d.iter().map(|&v| if v > 0.0 { v * v.ln() } else { 0.0 })) / n / theta
            } else {
                inf
            })
        }
        Kind::ShortfallBudget => {
            let d: Vec<f64> = y.values().iter().map(|v| -v).collect();
            Some(if is_density(&d, t) {
                d.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            } else {
                inf
            })
        }
        Kind::Scaled { inner, lambda } => {
            closed_form(inner, &y.scaled(1.0 / lambda), tol)?.map(|v| lambda * v)
        }
        _ => None,
    })
}

/// `E[XY] - φ(X)`, `-∞` where `φ` is infinite.
fn objective(phi: &Functional, y: &RandomVariable, x: &RandomVariable) -> Result<f64> {
    let v = phi.evaluate(x)?;
    Ok(if v.is_finite() {
        x.dot(y)? - v
    } else {
        f64::NEG_INFINITY
    })
}

/// Candidate rays: constants, the centred `Y`, and indicators of the atoms
/// carrying the largest and smallest values of `Y`, each with both signs.
fn candidate_rays(y: &RandomVariable) -> Vec<RandomVariable> {
    let space = y.space();
    let n = y.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| y.values()[j].total_cmp(&y.values()[i]).then(i.cmp(&j)));
    let mut base = vec![
        RandomVariable::constant(space, 1.0),
        y.shifted(-y.expectation()),
    ];
    for k in 1..n {
        base.push(RandomVariable::indicator(space, &order[..k]));
        base.push(RandomVariable::indicator(space, &order[n - k..]));
    }
    base.into_iter()
        .filter(|d| d.max() != 0.0 || d.min() != 0.0)
        .flat_map(|d| [-&d, d])
        .collect()
}

/// A ray `x0 + t d` along which the objective passes the divergence
/// threshold within the allowed number of doublings of `t`.
fn ray_certificate(
    phi: &Functional,
    y: &RandomVariable,
    x0: &RandomVariable,
    tol: &Tolerances,
) -> Result<Option<(RandomVariable, f64)>> {
    let f0 = objective(phi, y, x0)?;
    for d in candidate_rays(y) {
        let mut prev = f0;
        let mut t = 1.0;
        for _ in 0..=tol.ray_doublings {
            let v = objective(phi, y, &x0.add_scaled(t, &d))?;
            if v > tol.divergence_threshold {
                return Ok(Some((d, t)));
            }
            // Concave along the ray: once it drops it keeps dropping.
            if !(v >= prev) {
                break;
            }
            prev = v;
            t *= 2.0;
        }
    }
    Ok(None)
}

const ASCENT_STARTS: u64 = 4;
const ASCENT_MAX_ITER: u64 = 2000;

fn ascent(phi: &Functional, y: &RandomVariable, tol: &Tolerances) -> Result<ConjugateResult> {
    let space = y.space();
    let zero = RandomVariable::zero(space);
    if ray_certificate(phi, y, &zero, tol)?.is_some() {
        return Ok(ConjugateResult {
            value: ExtReal::INFINITY,
            status: ConjugateStatus::UnboundedDetected,
            iterations: 0,
        });
    }
    let mut starts = vec![zero];
    starts.extend(phi.probes());
    for s in 0..ASCENT_STARTS {
        starts.push(test_point(&mut trial_rng(0, s), space.n()));
    }
    let mut best = f64::NEG_INFINITY;
    let mut iterations = 0;
    for start in starts {
        let (v, it) = climb(phi, y, start)?;
        iterations += it;
        best = best.max(v);
    }
    if best == f64::NEG_INFINITY {
        return Err(Error::precondition(
            "conjugate",
            format!("{} is infinite at every ascent start", phi.label()),
        ));
    }
    Ok(ConjugateResult {
        value: ExtReal(best),
        status: ConjugateStatus::Numerical,
        iterations,
    })
}

/// Gradient ascent with central differences and backtracking.
fn climb(phi: &Functional, y: &RandomVariable, start: RandomVariable) -> Result<(f64, u64)> {
    let f = |x: &RandomVariable| objective(phi, y, x);
    let mut x = start;
    let mut fx = f(&x)?;
    if !fx.is_finite() {
        return Ok((fx, 0));
    }
    let n = x.n();
    let mut step = 1.0;
    for it in 0..ASCENT_MAX_ITER {
        let mut grad = vec![0.0; n];
        for i in 0..n {
            let h = 1e-6 * (1.0 + x.values()[i].abs());
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            let e = RandomVariable::from_finite(e);
            let up = f(&x.add_scaled(h, &e))?;
            let down = f(&x.add_scaled(-h, &e))?;
            grad[i] = match (up.is_finite(), down.is_finite()) {
                (true, true) => (up - down) / (2.0 * h),
                (true, false) => (up - fx) / h,
                (false, true) => (fx - down) / h,
                (false, false) => 0.0,
            };
        }
        let g2 = fsum(grad.iter().map(|g| g * g));
        if !(g2 > 1e-24) {
            return Ok((fx, it));
        }
        let g = RandomVariable::from_finite(grad);
        let mut accepted = false;
        while step > 1e-16 {
            let cand = x.add_scaled(step, &g);
            let fc = f(&cand)?;
            if fc > fx + 1e-4 * step * g2 {
                let gain = fc - fx;
                x = cand;
                fx = fc;
                step *= 2.0;
                accepted = true;
                if gain <= 1e-15 * (1.0 + fx.abs()) {
                    return Ok((fx, it + 1));
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return Ok((fx, it + 1));
        }
    }
    Ok((fx, ASCENT_MAX_ITER))
}

/// Extremes of `φ(X) - sup_{Y in grid} {E[XY] - φ*(Y)}` over the test points.
/// `max` is the duality gap; `min >= 0` is weak duality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityGap {
    pub max: f64,
    pub min: f64,
    /// Test points with finite `φ(X)`.
    pub points: usize,
    /// Grid points with finite `φ*(Y)`.
    pub dual_points: usize,
}

pub fn biconjugate_gap(
    phi: &Functional,
    test_points: &[RandomVariable],
    dual_grid: &[RandomVariable],
) -> Result<DualityGap> {
    biconjugate_gap_with(phi, test_points, dual_grid, &Tolerances::default())
}

pub fn biconjugate_gap_with(
    phi: &Functional,
    test_points: &[RandomVariable],
    dual_grid: &[RandomVariable],
    tol: &Tolerances,
) -> Result<DualityGap> {
    let mut duals = Vec::new();
    for y in dual_grid {
        let c = conjugate_auto(phi, y, tol)?;
        if c.value.is_finite() {
            duals.push((y, c.value.0));
        }
    }
    let mut gap = DualityGap {
        max: f64::NEG_INFINITY,
        min: f64::INFINITY,
        points: 0,
        dual_points: duals.len(),
    };
    for x in test_points {
        let v = phi.evaluate(x)?;
        if !v.is_finite() {
            continue;
        }
        let mut sup = f64::NEG_INFINITY;
        for (y, c) in &duals {
            check_same_space(x, y)?;
            sup = sup.max(x.dot(y)? - c);
        }
        let g = v - sup;
        gap.max = gap.max.max(g);
        gap.min = gap.min.min(g);
        gap.points += 1;
    }
    Ok(gap)
}

/// Checks `φ(Z) = E[ZY] + φ(0)` on the basis vectors and on `trials` random
/// combinations with coefficients in `[-10, 10]`.
pub fn affine_representation_check(
    phi: &Functional,
    span_basis: &[RandomVariable],
    y: &RandomVariable,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let name = "affine_representation";
    let space = y.space();
    for b in span_basis {
        check_same_space(b, y)?;
    }
    let phi0 = phi.evaluate(&RandomVariable::zero(space))?;
    if !phi0.is_finite() {
        return Err(Error::precondition(name, "phi(0) must be finite"));
    }
    let reference = phi.reference_scale(space);
    let mut points: Vec<(Option<u64>, RandomVariable)> =
        span_basis.iter().map(|b| (None, b.clone())).collect();
    if !span_basis.is_empty() {
        for trial in 0..trials {
            let mut rng = trial_rng(seed, trial);
            let mut z = RandomVariable::zero(space);
            for b in span_basis {
                z = z.add_scaled(rng.random_range(-10.0..=10.0), b);
            }
            points.push((Some(trial), z));
        }
    }
    let mut worst = 0.0_f64;
    for (trial, z) in &points {
        let v = phi.evaluate(z)?;
        let rhs = z.dot(y)? + phi0;
        let residual = (v - rhs).abs();
        worst = worst.max(residual);
        let scale = v.abs().max(rhs.abs()).max(phi0.abs()).max(reference);
        if !within(residual, tol.representation, scale) {
            let w = trial.map_or_else(Witness::new, Witness::at_trial);
            return Ok(Verdict::new(name, Outcome::Fail, points.len() as u64, seed)
                .with_residual(worst)
                .with_witness(
                    w.vector("Z", z)
                        .vector("Y", y)
                        .scalar("phi(Z)", v)
                        .scalar("E[ZY] + phi(0)", rhs),
                ));
        }
    }
    Ok(Verdict::new(name, Outcome::Pass, points.len() as u64, seed).with_residual(worst))
}

/// Default `m` grid for affinity checks.
pub const DEFAULT_M_GRID: [f64; 9] = [-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0];

/// Least-squares fit of `m -> φ(mZ) - φ(0)` through the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFit {
    pub slope: f64,
    pub max_residual: f64,
    /// `max |φ(mZ)|` over the grid, the scale for relative decisions.
    pub scale: f64,
    pub grid: Vec<f64>,
}

impl AffineFit {
    /// Affine within the relative tolerance.
    pub fn is_affine(&self, rel: f64) -> bool {
        within(self.max_residual, rel, self.scale)
    }
}

pub fn affine_slope(phi: &Functional, z: &RandomVariable, m_grid: &[f64]) -> Result<AffineFit> {
    if !m_grid.contains(&0.0)
        || !m_grid.iter().any(|&m| m > 0.0)
        || !m_grid.iter().any(|&m| m < 0.0)
    {
        return Err(Error::Domain(
            "m grid must contain 0 and values of both signs".into(),
        ));
    }
    let values = m_grid
        .iter()
        .map(|&m| {
            let v = phi.evaluate(&z.scaled(m))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NotAffine { m })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let phi0 = phi.evaluate(&RandomVariable::zero(z.space()))?;
    let num = fsum(m_grid.iter().zip(&values).map(|(m, v)| m * (v - phi0)));
    let den = fsum(m_grid.iter().map(|m| m * m));
    let slope = num / den;
    let max_residual = m_grid
        .iter()
        .zip(&values)
        .map(|(m, v)| (v - phi0 - slope * m).abs())
        .fold(0.0, f64::max);
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(AffineFit {
        slope,
        max_residual,
        scale,
        grid: m_grid.to_vec(),
    })
}

/// Densities on two atoms: `(2p, 2(1 - p))` for `p` on a uniform grid of
/// `points >= 2` values in `[0, 1]`, returned as dual variables `Y = -D`.
/// The uniform density `p = 1/2` is appended when the grid misses it.
pub fn two_atom_density_grid(points: usize) -> Vec<RandomVariable> {
    let points = points.max(2);
    let density = |p: f64| RandomVariable::from_finite(vec![-2.0 * p, -2.0 * (1.0 - p)]);
    let mut grid: Vec<RandomVariable> = (0..points)
        .map(|i| density(i as f64 / (points - 1) as f64))
        .collect();
    if points.is_multiple_of(2) {
        grid.push(density(0.5));
    }
    grid
}

/// The distortion `u -> min(u/α, 1)` whose Choquet integral of `-X` is
/// expected shortfall at level `α`.
pub fn expected_shortfall_distortion(alpha: f64) -> Result<DistortionFunction> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(DistortionFunction::identity());
    }
    DistortionFunction::new(vec![[0.0, 0.0], [alpha, 1.0], [1.0, 1.0]])
}
