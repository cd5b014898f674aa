//! Extended-real functionals `φ: R^n -> (-∞, ∞]` and the built-in catalog.
//!
//! A [`Functional`] pairs an evaluator with [`Claims`] about its structure.
//! Claims are assertions for the checks in [`crate::collapse`] to falsify,
//! never facts the library relies on.
//!
//! Sign conventions are explicit: risk measures satisfy
//! `ρ(X + m) = ρ(X) - m`, pricing rules `π(X + m) = π(X) + m`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{Capacity, CapacitySource, DistortionFunction, MAX_SUBMODULAR_ATOMS};
use crate::error::{Error, Result};
use crate::numeric::{fsum, norm2};
use crate::rng::{test_point, trial_rng};
use crate::space::{RandomVariable, SampleSpace};
use crate::tolerance::Tolerances;
use crate::verdict::{Outcome, Verdict, Witness};

/// Direction of cash additivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConvention {
    /// `ρ(X + m) = ρ(X) - m`.
    RiskMeasure,
    /// `π(X + m) = π(X) + m`.
    PricingRule,
}

impl SignConvention {
    /// Slope of `m -> φ(X + m)`.
    pub fn slope(self) -> f64 {
        match self {
            SignConvention::RiskMeasure => -1.0,
            SignConvention::PricingRule => 1.0,
        }
    }
}

/// Declared structural properties.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claims {
    pub convex: bool,
    pub law_invariant: bool,
    pub sublinear: bool,
    pub decreasing: bool,
    pub increasing: bool,
    pub cash_additive: Option<SignConvention>,
}

/// Traded asset `S = (S0, S1)` with price `S0 > 0` and payoff `S1 >= 0`, `S1 != 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EligibleAsset {
    price: f64,
    payoff: RandomVariable,
}

impl EligibleAsset {
    pub fn new(price: f64, payoff: RandomVariable) -> Result<Self> {
        if !(price > 0.0 && price.is_finite()) {
            return Err(Error::InvalidFunctional(format!(
                "asset price must be > 0, got {price}"
            )));
        }
        if payoff.min() < 0.0 || payoff.max() == 0.0 {
            return Err(Error::InvalidFunctional(
                "asset payoff must be nonnegative and nonzero".into(),
            ));
        }
        Ok(EligibleAsset { price, payoff })
    }

    pub fn price(&self) -> f64 {
        self.price
    }

    pub fn payoff(&self) -> &RandomVariable {
        &self.payoff
    }

    pub fn is_risky(&self, tol: f64) -> bool {
        !self.payoff.is_constant(tol)
    }
}

pub type Evaluator = Arc<dyn Fn(&RandomVariable) -> f64 + Send + Sync>;

/// How a functional is evaluated.
#[derive(Clone)]
pub enum Kind {
    MeanAffine {
        a: f64,
        b: f64,
    },
    ExpectedShortfall {
        alpha: f64,
    },
    Entropic {
        theta: f64,
    },
    Choquet(CapacitySource),
    /// 0 on `{αW + βZ : α < 1}`, `β²` on `{W + βZ}`, `+∞` elsewhere.
    AffineNotTranslationInvariant {
        w: RandomVariable,
        z: RandomVariable,
    },
    /// `inf{m : E[min(X + m, 0)] >= -1}`.
    ShortfallBudget,
    SAdditive {
        base: Box<Functional>,
        asset: EligibleAsset,
        bracket: (f64, f64),
        tol: f64,
        doublings: u32,
    },
    Scaled {
        inner: Box<Functional>,
        lambda: f64,
    },
    Custom(Evaluator),
}

impl fmt::Debug for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::MeanAffine { a, b } => write!(f, "MeanAffine {{ a: {a}, b: {b} }}"),
            Kind::ExpectedShortfall { alpha } => {
                write!(f, "ExpectedShortfall {{ alpha: {alpha} }}")
            }
            Kind::Entropic { theta } => write!(f, "Entropic {{ theta: {theta} }}"),
            Kind::Choquet(c) => write!(f, "Choquet({c:?})"),
            Kind::AffineNotTranslationInvariant { w, z } => {
                write!(f, "AffineNotTranslationInvariant {{ w: {w:?}, z: {z:?} }}")
            }
            Kind::ShortfallBudget => write!(f, "ShortfallBudget"),
            Kind::SAdditive { base, asset, .. } => {
                write!(f, "SAdditive {{ base: {base:?}, asset: {asset:?} }}")
            }
            Kind::Scaled { inner, lambda } => {
                write!(f, "Scaled {{ inner: {inner:?}, lambda: {lambda} }}")
            }
            Kind::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Functional {
    label: String,
    claims: Claims,
    kind: Kind,
}

impl Functional {
    /// A user-supplied evaluator. It must be pure and never return `-∞` or NaN.
    pub fn custom(
        label: impl Into<String>,
        claims: Claims,
        f: impl Fn(&RandomVariable) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Functional {
            label: label.into(),
            claims,
            kind: Kind::Custom(Arc::new(f)),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn claims(&self) -> Claims {
        self.claims
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_claims(mut self, claims: Claims) -> Self {
        self.claims = claims;
        self
    }

    /// `λφ` for `λ > 0`. Cash additivity is dropped unless `λ = 1`.
    pub fn scaled(&self, lambda: f64) -> Result<Functional> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "scale must be positive, got {lambda}"
            )));
        }
        let mut claims = self.claims;
        if lambda != 1.0 {
            claims.cash_additive = None;
        }
        Ok(Functional {
            label: format!("{lambda}*{}", self.label),
            claims,
            kind: Kind::Scaled {
                inner: Box::new(self.clone()),
                lambda,
            },
        })
    }

    /// Atom count the functional is tied to, if any.
    pub fn atoms(&self) -> Option<usize> {
        match &self.kind {
            Kind::Choquet(c) => c.atoms(),
            Kind::AffineNotTranslationInvariant { w, .. } => Some(w.n()),
            Kind::SAdditive { base, asset, .. } => base.atoms().or(Some(asset.payoff.n())),
            Kind::Scaled { inner, .. } => inner.atoms(),
            _ => None,
        }
    }

    /// The space to run checks on: `atoms()` if tied, else `fallback`.
    pub fn space_or(&self, fallback: SampleSpace) -> Result<SampleSpace> {
        match self.atoms() {
            Some(n) if n != fallback.n() => Err(Error::SpaceMismatch {
                left: n,
                right: fallback.n(),
            }),
            _ => Ok(fallback),
        }
    }

    /// `φ(X)`, possibly `+∞`.
    pub fn evaluate(&self, x: &RandomVariable) -> Result<f64> {
        if let Some(n) = self.atoms() {
            if n != x.n() {
                return Err(Error::SpaceMismatch {
                    left: n,
                    right: x.n(),
                });
            }
        }
        let v = match &self.kind {
            Kind::MeanAffine { a, b } => a * x.expectation() + b,
            Kind::ExpectedShortfall { alpha } => expected_shortfall(*alpha, x),
            Kind::Entropic { theta } => entropic(*theta, x),
            Kind::Choquet(c) => c.choquet(x)?,
            Kind::AffineNotTranslationInvariant { w, z } => affine_not_ti(w, z, x),
            Kind::ShortfallBudget => shortfall_budget(x),
            Kind::SAdditive {
                base,
                asset,
                bracket,
                tol,
                doublings,
            } => s_additive(base, asset, *bracket, *tol, *doublings, x)?,
            Kind::Scaled { inner, lambda } => lambda * inner.evaluate(x)?,
            Kind::Custom(f) => f(x),
        };
        if v.is_nan() || v == f64::NEG_INFINITY {
            return Err(Error::InvalidFunctional(format!(
                "{} returned {v}; values must lie in (-inf, +inf]",
                self.label
            )));
        }
        Ok(v)
    }

    /// Structured domain points worth trying before random ones; for
    /// functionals that are finite only on a subspace these are the points
    /// where anything interesting happens.
    pub fn probes(&self) -> Vec<RandomVariable> {
        match &self.kind {
            Kind::AffineNotTranslationInvariant { w, z } => vec![
                w.clone(),
                z.clone(),
                w + z,
                w.add_scaled(2.0, z),
                w.scaled(0.5).add_scaled(1.0, z),
                -z,
            ],
            Kind::SAdditive { asset, base, .. } => {
                let s = asset.payoff.clone();
                let mut out = vec![s.clone(), -&s];
                out.extend(base.probes());
                out
            }
            Kind::Scaled { inner, .. } => inner.probes(),
            _ => Vec::new(),
        }
    }

    /// Magnitude of the functional near the origin: the largest finite
    /// `|φ(c)|` for `c` in `{0, 1, -1}`. Scales with the functional, so
    /// tolerances built from it are relative.
    pub fn reference_scale(&self, space: SampleSpace) -> f64 {
        [0.0, 1.0, -1.0]
            .iter()
            .filter_map(|&c| self.evaluate(&RandomVariable::constant(space, c)).ok())
            .filter(|v| v.is_finite())
            .map(f64::abs)
            .fold(0.0, f64::max)
    }
}

/// `X -> a E[X] + b`.
pub fn make_mean_affine(a: f64, b: f64) -> Result<Functional> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidFunctional(
            "mean_affine needs finite a, b".into(),
        ));
    }
    let cash_additive = if a == -1.0 {
        Some(SignConvention::RiskMeasure)
    } else if a == 1.0 {
        Some(SignConvention::PricingRule)
    } else {
        None
    };
    Ok(Functional {
        label: format!("mean_affine(a={a}, b={b})"),
        claims: Claims {
            convex: true,
            law_invariant: true,
            sublinear: b == 0.0,
            decreasing: a <= 0.0,
            increasing: a >= 0.0,
            cash_additive,
        },
        kind: Kind::MeanAffine { a, b },
    })
}

/// `ρ(X) = -(1/α) ∫_0^α q_X(u) du`.
pub fn make_expected_shortfall(alpha: f64) -> Result<Functional> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidFunctional(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(Functional {
        label: format!("expected_shortfall(alpha={alpha})"),
        claims: Claims {
            convex: true,
            law_invariant: true,
            sublinear: true,
            decreasing: true,
            increasing: false,
            cash_additive: Some(SignConvention::RiskMeasure),
        },
        kind: Kind::ExpectedShortfall { alpha },
    })
}

/// `ρ(X) = (1/θ) log E[exp(-θX)]`.
pub fn make_entropic(theta: f64) -> Result<Functional> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidFunctional(format!(
            "theta must be > 0, got {theta}"
        )));
    }
    Ok(Functional {
        label: format!("entropic(theta={theta})"),
        claims: Claims {
            convex: true,
            law_invariant: true,
            sublinear: false,
            decreasing: true,
            increasing: false,
            cash_additive: Some(SignConvention::RiskMeasure),
        },
        kind: Kind::Entropic { theta },
    })
}

/// `X -> E_c[X]`, convex and sublinear exactly when `c` is submodular.
pub fn make_choquet(c: CapacitySource) -> Functional {
    let submodular = match &c {
        CapacitySource::Distortion(g) => g.is_concave(1e-12),
        CapacitySource::Table(t) if t.n() <= MAX_SUBMODULAR_ATOMS => {
            crate::capacity::is_submodular(t, 1e-12).is_ok_and(|v| v.outcome == Outcome::Pass)
        }
        CapacitySource::Table(_) => false,
    };
    let label = match &c {
        CapacitySource::Distortion(g) => format!("choquet(distortion, {} knots)", g.knots().len()),
        CapacitySource::Table(t) => format!("choquet(table, n={})", t.n()),
    };
    Functional {
        label,
        claims: Claims {
            convex: submodular,
            law_invariant: c.is_law_invariant(),
            sublinear: submodular,
            decreasing: false,
            increasing: true,
            cash_additive: Some(SignConvention::PricingRule),
        },
        kind: Kind::Choquet(c),
    }
}

/// Convex and affine along `Z`, yet not translation invariant along `Z`.
/// `W` and `Z` must be linearly independent.
pub fn make_example_affine_not_ti(w: RandomVariable, z: RandomVariable) -> Result<Functional> {
    if w.n() != z.n() {
        return Err(Error::SpaceMismatch {
            left: w.n(),
            right: z.n(),
        });
    }
    let (ww, zz, wz) = gram(&w, &z);
    if !(ww * zz - wz * wz > 1e-12 * ww * zz) {
        return Err(Error::InvalidFunctional(
            "W and Z must be linearly independent".into(),
        ));
    }
    if w.n() == 2 {
        log::warn!("on two atoms span{{W, Z}} is the whole space; the +inf branch is empty");
    }
    Ok(Functional {
        label: "example_affine_not_ti".into(),
        claims: Claims {
            convex: true,
            ..Claims::default()
        },
        kind: Kind::AffineNotTranslationInvariant { w, z },
    })
}

/// `ρ(X) = inf{m : E[min(X + m, 0)] >= -1}`: convex, law invariant, cash
/// additive, decreasing, but not positively homogeneous.
pub fn make_final_remark_rho() -> Functional {
    Functional {
        label: "final_remark_rho".into(),
        claims: Claims {
            convex: true,
            law_invariant: true,
            sublinear: false,
            decreasing: true,
            increasing: false,
            cash_additive: Some(SignConvention::RiskMeasure),
        },
        kind: Kind::ShortfallBudget,
    }
}

/// `ρ(X) = inf{m : base(X + (m/S0) S1) <= 0}`.
pub fn make_s_additive(
    base: Functional,
    asset: EligibleAsset,
    bracket: (f64, f64),
) -> Result<Functional> {
    make_s_additive_with(base, asset, bracket, &Tolerances::default())
}

pub fn make_s_additive_with(
    base: Functional,
    asset: EligibleAsset,
    bracket: (f64, f64),
    tol: &Tolerances,
) -> Result<Functional> {
    if !(bracket.0 < bracket.1) || !bracket.0.is_finite() || !bracket.1.is_finite() {
        return Err(Error::InvalidFunctional(format!("bad bracket {bracket:?}")));
    }
    if let Some(n) = base.atoms() {
        if n != asset.payoff.n() {
            return Err(Error::SpaceMismatch {
                left: n,
                right: asset.payoff.n(),
            });
        }
    }
    // Cash additive only when S1 is the constant S0.
    let cash = asset.payoff.is_constant(0.0) && asset.payoff.values()[0] == asset.price;
    let claims = Claims {
        convex: base.claims.convex,
        law_invariant: base.claims.law_invariant,
        sublinear: base.claims.sublinear,
        decreasing: true,
        increasing: false,
        cash_additive: cash.then_some(SignConvention::RiskMeasure),
    };
    Ok(Functional {
        label: format!("s_additive({}, S0={})", base.label, asset.price),
        claims,
        kind: Kind::SAdditive {
            base: Box::new(base),
            asset,
            bracket,
            tol: tol.bisection,
            doublings: tol.ray_doublings,
        },
    })
}

pub const DEFAULT_BRACKET: (f64, f64) = (-1e6, 1e6);

fn expected_shortfall(alpha: f64, x: &RandomVariable) -> f64 {
    if alpha == 1.0 {
        return -x.expectation();
    }
    let s = x.sorted_values();
    let nf = s.len() as f64;
    // Largest k with k/n <= alpha.
    let mut k = ((alpha * nf).floor() as usize).min(s.len());
    while k < s.len() && (k + 1) as f64 / nf <= alpha {
        k += 1;
    }
    while k > 0 && k as f64 / nf > alpha {
        k -= 1;
    }
    let frac = alpha - k as f64 / nf;
    let mut terms: Vec<f64> = s[..k].iter().map(|v| v / nf).collect();
    if frac > 0.0 && k < s.len() {
        terms.push(frac * s[k]);
    }
    -fsum(terms) / alpha
}

fn entropic(theta: f64, x: &RandomVariable) -> f64 {
    let t: Vec<f64> = x.values().iter().map(|v| -theta * v).collect();
    let m = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s = fsum(t.iter().map(|v| (v - m).exp())) / t.len() as f64;
    (m + s.ln()) / theta
}

fn gram(w: &RandomVariable, z: &RandomVariable) -> (f64, f64, f64) {
    let dot = |a: &[f64], b: &[f64]| fsum(a.iter().zip(b).map(|(p, q)| p * q));
    (
        dot(w.values(), w.values()),
        dot(z.values(), z.values()),
        dot(w.values(), z.values()),
    )
}

/// Least-squares coordinates of `x` on `(w, z)` and the residual norm.
pub(crate) fn decompose(
    w: &RandomVariable,
    z: &RandomVariable,
    x: &RandomVariable,
) -> (f64, f64, f64) {
    let (ww, zz, wz) = gram(w, z);
    let dot = |a: &[f64], b: &[f64]| fsum(a.iter().zip(b).map(|(p, q)| p * q));
    let wx = dot(w.values(), x.values());
    let zx = dot(z.values(), x.values());
    let det = ww * zz - wz * wz;
    let alpha = (wx * zz - zx * wz) / det;
    let beta = (zx * ww - wx * wz) / det;
    let r: Vec<f64> = x
        .values()
        .iter()
        .zip(w.values().iter().zip(z.values()))
        .map(|(xv, (wv, zv))| xv - alpha * wv - beta * zv)
        .collect();
    (alpha, beta, norm2(&r))
}

fn affine_not_ti(w: &RandomVariable, z: &RandomVariable, x: &RandomVariable) -> f64 {
    let mem_tol = 1e-9 * (1.0 + norm2(x.values()));
    let (alpha, beta, r) = decompose(w, z, x);
    if r > mem_tol || alpha > 1.0 + mem_tol {
        f64::INFINITY
    } else if (alpha - 1.0).abs() <= mem_tol {
        beta * beta
    } else {
        0.0
    }
}

/// With ascending `x_(1) <= ... <= x_(n)` and `S_k` the sum of the `k`
/// smallest, `h(m) = (S_k + k m)/n` while exactly the `k` smallest values
/// lie below `-m`. The root of `h = -1` sits on the piece whose left
/// breakpoint `-x_(k)` still has `h >= -1`.
fn shortfall_budget(x: &RandomVariable) -> f64 {
    let s = x.sorted_values();
    let n = s.len();
    let nf = n as f64;
    let mut k_star = 1;
    for k in 2..=n {
        let h_k = fsum(s[..k].iter().map(|v| v - s[k - 1])) / nf;
        if h_k >= -1.0 {
            k_star = k;
        } else {
            break;
        }
    }
    let sum = fsum(s[..k_star].iter().copied());
    (-nf - sum) / k_star as f64
}

fn s_additive(
    base: &Functional,
    asset: &EligibleAsset,
    bracket: (f64, f64),
    tol: f64,
    doublings: u32,
    x: &RandomVariable,
) -> Result<f64> {
    let s0 = asset.price;
    let s1 = &asset.payoff;
    let acceptable =
        |m: f64| -> Result<bool> { Ok(base.evaluate(&x.add_scaled(m / s0, s1))? <= 0.0) };
    let (mut lo, mut hi) = bracket;
    let mut width = hi - lo;
    let mut steps = 0;
    while !acceptable(hi)? {
        if steps == doublings {
            return Err(Error::NoFiniteCapital(format!(
                "{} never accepts X after {doublings} bracket doublings",
                base.label
            )));
        }
        lo = hi;
        hi += width;
        width *= 2.0;
        steps += 1;
    }
    let mut width = hi - lo;
    steps = 0;
    while acceptable(lo)? {
        if steps == doublings {
            return Err(Error::NoFiniteCapital(format!(
                "{} accepts X at every level after {doublings} bracket doublings",
                base.label
            )));
        }
        hi = lo;
        lo -= width;
        width *= 2.0;
        steps += 1;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if acceptable(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// JSON description of a built-in functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionalSpec {
    ExpectedShortfall {
        alpha: f64,
    },
    Entropic {
        theta: f64,
    },
    Choquet {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        distortion: Option<DistortionFunction>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        capacity: Option<Capacity>,
    },
    MeanAffine {
        a: f64,
        b: f64,
    },
    FinalRemarkRho,
    #[serde(rename = "affine_not_translation_invariant", alias = "example_3_3")]
    ExampleAffineNotTi {
        #[serde(rename = "W")]
        w: RandomVariable,
        #[serde(rename = "Z")]
        z: RandomVariable,
    },
    SAdditive {
        base: Box<FunctionalSpec>,
        #[serde(rename = "S0")]
        s0: f64,
        #[serde(rename = "S1")]
        s1: RandomVariable,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bracket: Option<(f64, f64)>,
    },
}

impl FunctionalSpec {
    pub fn build(&self) -> Result<Functional> {
        self.build_with(&Tolerances::default())
    }

    pub fn build_with(&self, tol: &Tolerances) -> Result<Functional> {
        match self {
            FunctionalSpec::ExpectedShortfall { alpha } => make_expected_shortfall(*alpha),
            FunctionalSpec::Entropic { theta } => make_entropic(*theta),
            FunctionalSpec::Choquet {
                distortion,
                capacity,
            } => match (distortion, capacity) {
                (Some(g), None) => Ok(make_choquet(CapacitySource::Distortion(g.clone()))),
                (None, Some(c)) => Ok(make_choquet(CapacitySource::Table(c.clone()))),
                _ => Err(Error::InvalidFunctional(
                    "choquet needs exactly one of \"distortion\" or \"capacity\"".into(),
                )),
            },
            FunctionalSpec::MeanAffine { a, b } => make_mean_affine(*a, *b),
            FunctionalSpec::FinalRemarkRho => Ok(make_final_remark_rho()),
            FunctionalSpec::ExampleAffineNotTi { w, z } => {
                make_example_affine_not_ti(w.clone(), z.clone())
            }
            FunctionalSpec::SAdditive {
                base,
                s0,
                s1,
                bracket,
            } => make_s_additive_with(
                base.build_with(tol)?,
                EligibleAsset::new(*s0, s1.clone())?,
                bracket.unwrap_or(DEFAULT_BRACKET),
                tol,
            ),
        }
    }
}

/// Default `λ` grid for frictionlessness; contains both signs.
pub const DEFAULT_LAMBDA_GRID: [f64; 8] = [-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0];

/// Whether `X` is frictionless under `π`: `π(λX) = λπ(X)` on the grid,
/// within `tol (1 + |λ|)` relative to `max(|π(X)|, |π(-X)|)`.
pub fn is_frictionless(
    pi: &Functional,
    x: &RandomVariable,
    lambda_grid: &[f64],
    tol: f64,
) -> Result<Verdict> {
    let name = "is_frictionless";
    let space = x.space();
    let p0 = pi.evaluate(&RandomVariable::zero(space))?;
    let scale0 = pi.reference_scale(space);
    if !(p0.abs() <= tol * scale0) {
        return Err(Error::precondition(
            name,
            format!("pi(0) = {p0}, expected 0"),
        ));
    }
    if !lambda_grid.iter().any(|&l| l < 0.0) {
        return Err(Error::Domain(
            "lambda grid must contain negative values".into(),
        ));
    }
    let px = pi.evaluate(x)?;
    let scale = px.abs().max(pi.evaluate(&-x)?.abs());
    let mut worst = 0.0_f64;
    for &lambda in lambda_grid {
        let pl = pi.evaluate(&x.scaled(lambda))?;
        let residual = (pl - lambda * px).abs();
        worst = worst.max(residual);
        if !(residual == 0.0 || residual <= tol * (1.0 + lambda.abs()) * scale) {
            return Ok(
                Verdict::new(name, Outcome::Fail, lambda_grid.len() as u64, 0)
                    .with_residual(worst)
                    .with_witness(
                        Witness::new()
                            .vector("X", x)
                            .scalar("lambda", lambda)
                            .scalar("pi(X)", px)
                            .scalar("pi(lambda X)", pl),
                    ),
            );
        }
    }
    Ok(Verdict::new(name, Outcome::Pass, lambda_grid.len() as u64, 0).with_residual(worst))
}

/// Structured candidates: constants, single-atom indicators, leading-`k`
/// indicators, and two-point differences `e_i - e_j`.
pub(crate) fn structured_points(space: SampleSpace) -> Vec<RandomVariable> {
    let n = space.n();
    let mut out = vec![
        RandomVariable::constant(space, 1.0),
        RandomVariable::constant(space, -1.0),
    ];
    for i in 0..n {
        out.push(RandomVariable::indicator(space, &[i]));
    }
    for k in 2..n {
        out.push(RandomVariable::indicator(
            space,
            &(0..k).collect::<Vec<_>>(),
        ));
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

/// Falsifies `X >= 0, X != 0 => ρ(-X) > 0`. A pass means no counterexample
/// among the structured candidates and `trials` random ones.
pub fn is_relevant(
    rho: &Functional,
    space: SampleSpace,
    trials: u64,
    seed: u64,
) -> Result<Verdict> {
    let name = "is_relevant";
    let space = rho.space_or(space)?;
    let mut candidates: Vec<RandomVariable> = structured_points(space)
        .into_iter()
        .filter(|x| x.min() >= 0.0 && x.max() > 0.0)
        .collect();
    candidates.extend(
        rho.probes()
            .into_iter()
            .filter(|x| x.min() >= 0.0 && x.max() > 0.0),
    );
    let structured = candidates.len();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let x = test_point(&mut rng, space.n()).map(f64::abs);
        let x = if x.max() > 0.0 {
            x
        } else {
            RandomVariable::constant(space, 1.0)
        };
        candidates.push(x);
    }
    for (idx, x) in candidates.iter().enumerate() {
        let r = rho.evaluate(&-x)?;
        if !(r > 0.0) {
            let w = if idx >= structured {
                Witness::at_trial((idx - structured) as u64)
            } else {
                Witness::new()
            };
            return Ok(Verdict::new(name, Outcome::Fail, idx as u64 + 1, seed)
                .with_residual(-r)
                .with_witness(w.vector("X", x).scalar("rho(-X)", r)));
        }
    }
    Ok(
        Verdict::new(name, Outcome::Pass, candidates.len() as u64, seed).with_note(format!(
            "no counterexample in {} candidates",
            candidates.len()
        )),
    )
}

/// Falsifies `X != 0, ρ(X) <= 0 => ρ(-X) > 0`.
pub fn is_strongly_relevant(
    rho: &Functional,
    space: SampleSpace,
    trials: u64,
    seed: u64,
) -> Result<Verdict> {
    let name = "is_strongly_relevant";
    let space = rho.space_or(space)?;
    let mut candidates: Vec<(Option<u64>, RandomVariable)> = Vec::new();
    for x in structured_points(space).into_iter().chain(rho.probes()) {
        candidates.push((None, -&x));
        candidates.push((None, x));
    }
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let mut x = test_point(&mut rng, space.n());
        // Half the draws are shifted to sit on the acceptance boundary.
        if rng.random_bool(0.5) {
            if let Ok(r) = rho.evaluate(&x) {
                if r.is_finite() && rho.claims.cash_additive == Some(SignConvention::RiskMeasure) {
                    x = x.shifted(r);
                }
            }
        }
        candidates.push((Some(trial), x));
    }
    let mut tested = 0u64;
    for (trial, x) in &candidates {
        if x.max() == 0.0 && x.min() == 0.0 {
            continue;
        }
        let r = rho.evaluate(x)?;
        if r > 0.0 {
            continue;
        }
        tested += 1;
        let rn = rho.evaluate(&-x)?;
        if !(rn > 0.0) {
            let w = trial.map_or_else(Witness::new, Witness::at_trial);
            return Ok(Verdict::new(name, Outcome::Fail, tested, seed)
                .with_residual(-rn)
                .with_witness(w.vector("X", x).scalar("rho(X)", r).scalar("rho(-X)", rn)));
        }
    }
    Ok(
        Verdict::new(name, Outcome::Pass, candidates.len() as u64, seed).with_note(format!(
            "no counterexample among {tested} acceptable candidates ({} drawn)",
            candidates.len()
        )),
    )
}
