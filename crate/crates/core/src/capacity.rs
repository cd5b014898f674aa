//! Capacities, distortions, and Choquet integration.
//!
//! Two representations are supported. An explicit [`Capacity`] stores one
//! value per subset of atoms (up to [`MAX_TABLE_ATOMS`] atoms) and allows
//! exhaustive submodularity checks. A [`DistortionFunction`] `g` induces the
//! law-invariant capacity `c(E) = g(|E|/n)` for any `n` without tabulating it.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::fsum;
use crate::rng::trial_rng;
use crate::space::{RandomVariable, SampleSpace};
use crate::verdict::{Outcome, Verdict, Witness};

/// Largest atom count for an explicit capacity table.
pub const MAX_TABLE_ATOMS: usize = 20;
/// Largest atom count for the exhaustive pairwise submodularity check.
pub const MAX_SUBMODULAR_ATOMS: usize = 14;

/// Piecewise-linear `g: [0,1] -> [0,1]` through `knots`, with `g(0) = 0`,
/// `g(1) = 1`, and `g` nondecreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistortion")]
pub struct DistortionFunction {
    knots: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct RawDistortion {
    knots: Vec<[f64; 2]>,
}

impl TryFrom<RawDistortion> for DistortionFunction {
    type Error = Error;

    fn try_from(raw: RawDistortion) -> Result<Self> {
        DistortionFunction::new(raw.knots)
    }
}

impl DistortionFunction {
    pub fn new(knots: Vec<[f64; 2]>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidDistortion(msg.to_string()));
        if knots.len() < 2 {
            return bad("at least two knots required");
        }
        if knots.first() != Some(&[0.0, 0.0]) || knots.last() != Some(&[1.0, 1.0]) {
            return bad("knots must start at (0, 0) and end at (1, 1)");
        }
        for w in knots.windows(2) {
            let ([u0, g0], [u1, g1]) = (w[0], w[1]);
            if !(u1 > u0) {
                return bad("knot abscissae must be strictly increasing");
            }
            if !(g1 >= g0) {
                return bad("g must be nondecreasing");
            }
        }
        if knots
            .iter()
            .flatten()
            .any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0)
        {
            return bad("knots must lie in [0, 1]^2");
        }
        Ok(DistortionFunction { knots })
    }

    pub fn identity() -> Self {
        DistortionFunction {
            knots: vec![[0.0, 0.0], [1.0, 1.0]],
        }
    }

    /// Knots of `f` on the uniform grid `k/m`, `k = 0..=m`.
    pub fn sampled(f: impl Fn(f64) -> f64, m: usize) -> Result<Self> {
        let knots = (0..=m)
            .map(|k| {
                let u = k as f64 / m as f64;
                [
                    u,
                    if k == 0 {
                        0.0
                    } else if k == m {
                        1.0
                    } else {
                        f(u)
                    },
                ]
            })
            .collect();
        Self::new(knots)
    }

    pub fn knots(&self) -> &[[f64; 2]] {
        &self.knots
    }

    pub fn eval(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let i = self.knots.partition_point(|k| k[0] <= u);
        if i == 0 {
            return self.knots[0][1];
        }
        if i == self.knots.len() {
            return self.knots[i - 1][1];
        }
        let [u0, g0] = self.knots[i - 1];
        let [u1, g1] = self.knots[i];
        if u == u0 {
            return g0;
        }
        g0 + (g1 - g0) * (u - u0) / (u1 - u0)
    }

    /// Nonincreasing slopes between consecutive knots.
    pub fn is_concave(&self, tol: f64) -> bool {
        let slopes: Vec<f64> = self
            .knots
            .windows(2)
            .map(|w| (w[1][1] - w[0][1]) / (w[1][0] - w[0][0]))
            .collect();
        slopes.windows(2).all(|s| s[1] <= s[0] + tol)
    }

    /// `g(k/n)` for `k = 0..=n`; the only values seen by `n`-atom capacities.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        (0..=n).map(|k| self.eval(k as f64 / n as f64)).collect()
    }
}

/// Explicit capacity table indexed by atom bitmask (bit `i` = atom `i`).
///
/// JSON: `{"n": 2, "table": {"0": 0, "1": 0.5, "2": 0.5, "3": 1}}` with
/// decimal bitmask keys; every subset must be present.
#[derive(Debug, Clone, PartialEq)]
pub struct Capacity {
    n: usize,
    table: Vec<f64>,
}

impl Capacity {
    pub fn new(n: usize, table: Vec<f64>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidCapacity(msg));
        if n == 0 {
            return bad("capacity needs at least one atom".into());
        }
        if n > MAX_TABLE_ATOMS {
            return Err(Error::CapacitySize {
                n,
                max: MAX_TABLE_ATOMS,
            });
        }
        let full = (1usize << n) - 1;
        if table.len() != full + 1 {
            return bad(format!(
                "expected {} entries, got {}",
                full + 1,
                table.len()
            ));
        }
        if table[0] != 0.0 || table[full] != 1.0 {
            return bad("c(empty) = 0 and c(all atoms) = 1 required".into());
        }
        for (mask, &v) in table.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("c({mask}) = {v} outside [0, 1]"));
            }
            for i in 0..n {
                let smaller = mask & !(1 << i);
                if smaller != mask && table[smaller] > v {
                    return bad(format!("not monotone: c({smaller}) > c({mask})"));
                }
            }
        }
        Ok(Capacity { n, table })
    }

    /// `c(E) = g(|E|/n)` tabulated.
    pub fn from_distortion(g: &DistortionFunction, space: SampleSpace) -> Result<Self> {
        let n = space.n();
        if n > MAX_TABLE_ATOMS {
            return Err(Error::CapacitySize {
                n,
                max: MAX_TABLE_ATOMS,
            });
        }
        let grid = g.grid(n);
        let table = (0..1usize << n)
            .map(|mask| grid[mask.count_ones() as usize])
            .collect();
        Self::new(n, table)
    }

    /// The uniform probability `P(E) = |E|/n` as a capacity.
    pub fn probability(space: SampleSpace) -> Result<Self> {
        Self::from_distortion(&DistortionFunction::identity(), space)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, mask: usize) -> f64 {
        self.table[mask]
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Depends only on `|E|`, i.e. law invariant under the uniform `P`.
    pub fn is_symmetric(&self) -> bool {
        let mut by_size = vec![None; self.n + 1];
        self.table.iter().enumerate().all(|(mask, &v)| {
            let slot = &mut by_size[mask.count_ones() as usize];
            match *slot {
                None => {
                    *slot = Some(v);
                    true
                }
                Some(w) => w == v,
            }
        })
    }

    /// `max |c(E) - |E|/n|` over all subsets.
    pub fn distance_to_probability(&self) -> f64 {
        let n = self.n as f64;
        self.table
            .iter()
            .enumerate()
            .map(|(mask, v)| (v - mask.count_ones() as f64 / n).abs())
            .fold(0.0, f64::max)
    }
}

impl Serialize for Capacity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Table<'a>(&'a [f64]);

        impl Serialize for Table<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (mask, v) in self.0.iter().enumerate() {
                    map.serialize_entry(&mask.to_string(), v)?;
                }
                map.end()
            }
        }

        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("table", &Table(&self.table))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;

        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            n: usize,
            table: BTreeMap<String, f64>,
        }

        let raw = Raw::deserialize(d)?;
        if raw.n > MAX_TABLE_ATOMS {
            return Err(D::Error::custom(Error::CapacitySize {
                n: raw.n,
                max: MAX_TABLE_ATOMS,
            }));
        }
        let size = 1usize << raw.n;
        let mut table = vec![f64::NAN; size];
        for (key, v) in raw.table {
            let mask: usize = key
                .parse()
                .map_err(|_| D::Error::custom(format!("bad bitmask key {key:?}")))?;
            if mask >= size {
                return Err(D::Error::custom(format!("bitmask {mask} out of range")));
            }
            table[mask] = v;
        }
        if let Some(missing) = table.iter().position(|v| v.is_nan()) {
            return Err(D::Error::custom(format!("missing subset {missing}")));
        }
        Capacity::new(raw.n, table).map_err(D::Error::custom)
    }
}

/// A set function that can be evaluated on the upper level sets of a
/// variable. `order` lists atoms by decreasing value; the result holds
/// `c({order[0..k]})` for `k = 1..=n`.
pub trait SetFunction {
    fn atoms(&self) -> Option<usize>;
    fn level_values(&self, order: &[usize]) -> Vec<f64>;
}

impl SetFunction for Capacity {
    fn atoms(&self) -> Option<usize> {
        Some(self.n)
    }

    fn level_values(&self, order: &[usize]) -> Vec<f64> {
        let mut mask = 0usize;
        order
            .iter()
            .map(|&i| {
                mask |= 1 << i;
                self.table[mask]
            })
            .collect()
    }
}

impl SetFunction for DistortionFunction {
    /// Works on any number of atoms.
    fn atoms(&self) -> Option<usize> {
        None
    }

    fn level_values(&self, order: &[usize]) -> Vec<f64> {
        let n = order.len();
        (1..=n)
            .map(|k| {
                if k == n {
                    1.0
                } else {
                    self.eval(k as f64 / n as f64)
                }
            })
            .collect()
    }
}

/// Either capacity representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CapacitySource {
    Table(Capacity),
    Distortion(DistortionFunction),
}

impl CapacitySource {
    pub fn choquet(&self, x: &RandomVariable) -> Result<f64> {
        match self {
            CapacitySource::Table(c) => choquet_integral(c, x),
            CapacitySource::Distortion(g) => choquet_integral(g, x),
        }
    }

    pub fn atoms(&self) -> Option<usize> {
        match self {
            CapacitySource::Table(c) => Some(c.n()),
            CapacitySource::Distortion(_) => None,
        }
    }

    /// Law invariance under the uniform `P`.
    pub fn is_law_invariant(&self) -> bool {
        match self {
            CapacitySource::Table(c) => c.is_symmetric(),
            CapacitySource::Distortion(_) => true,
        }
    }

    /// Submodularity verdict on `n` atoms: exhaustive for tables, discrete
    /// concavity of `g(k/n)` for distortions.
    pub fn submodularity(&self, n: usize, tol: f64) -> Result<Verdict> {
        match self {
            CapacitySource::Table(c) => is_submodular(c, tol),
            CapacitySource::Distortion(g) => Ok(distortion_submodularity(g, n, tol)),
        }
    }

    /// `max |c(E) - P(E)|` over subsets of `n` atoms.
    pub fn distance_to_probability(&self, n: usize) -> f64 {
        match self {
            CapacitySource::Table(c) => c.distance_to_probability(),
            CapacitySource::Distortion(g) => g
                .grid(n)
                .iter()
                .enumerate()
                .map(|(k, v)| (v - k as f64 / n as f64).abs())
                .fold(0.0, f64::max),
        }
    }
}

pub fn capacity_from_distortion(g: &DistortionFunction, space: SampleSpace) -> Result<Capacity> {
    Capacity::from_distortion(g, space)
}

/// Atoms by decreasing value, ties by atom index.
fn descending_order(x: &RandomVariable) -> Vec<usize> {
    let v = x.values();
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));
    order
}

/// `E_c[X] = ∫_{-∞}^0 (c(X>x) - 1) dx + ∫_0^∞ c(X>x) dx`.
///
/// With `x_[1] >= ... >= x_[n]` and `A_k` the atoms of the top `k` values this
/// telescopes to `Σ_k (x_[k] - x_[k+1]) c(A_k)` with `x_[n+1] = 0`, which
/// covers both signs because `c(Ω) = 1`.
pub fn choquet_integral<C: SetFunction + ?Sized>(c: &C, x: &RandomVariable) -> Result<f64> {
    if let Some(n) = c.atoms() {
        if n != x.n() {
            return Err(Error::SpaceMismatch {
                left: n,
                right: x.n(),
            });
        }
    }
    let order = descending_order(x);
    let levels = c.level_values(&order);
    let v = x.values();
    let n = order.len();
    Ok(fsum((0..n).map(|k| {
        let next = if k + 1 < n { v[order[k + 1]] } else { 0.0 };
        (v[order[k]] - next) * levels[k]
    })))
}

/// Exhaustive check of `c(E ∪ F) + c(E ∩ F) <= c(E) + c(F) + tol`.
pub fn is_submodular(c: &Capacity, tol: f64) -> Result<Verdict> {
    let n = c.n();
    if n > MAX_SUBMODULAR_ATOMS {
        return Err(Error::CapacitySize {
            n,
            max: MAX_SUBMODULAR_ATOMS,
        });
    }
    let size = 1usize << n;
    // Per E: largest excess and first violating F > E.
    let per_e: Vec<(f64, Option<usize>)> = (0..size)
        .into_par_iter()
        .map(|e| {
            let mut worst = f64::NEG_INFINITY;
            let mut first = None;
            for f in (e + 1)..size {
                let excess = c.value(e | f) + c.value(e & f) - c.value(e) - c.value(f);
                worst = worst.max(excess);
                if first.is_none() && excess > tol {
                    first = Some(f);
                }
            }
            (worst, first)
        })
        .collect();
    let worst = per_e.iter().map(|p| p.0).fold(0.0, f64::max);
    let violation = per_e
        .iter()
        .enumerate()
        .find_map(|(e, (_, f))| f.map(|f| (e, f)));
    let pairs = (size as u64) * (size as u64 - 1) / 2;
    Ok(match violation {
        None => Verdict::new("is_submodular", Outcome::Pass, pairs, 0).with_residual(worst),
        Some((e, f)) => Verdict::new("is_submodular", Outcome::Fail, pairs, 0)
            .with_residual(worst)
            .with_witness(
                Witness::new()
                    .scalar("E", e as f64)
                    .scalar("F", f as f64)
                    .scalar("c(E)", c.value(e))
                    .scalar("c(F)", c.value(f))
                    .scalar("c(E|F)", c.value(e | f))
                    .scalar("c(E&F)", c.value(e & f)),
            ),
    })
}

/// Submodularity of `E -> g(|E|/n)`, equivalent to concavity of `k -> g(k/n)`.
/// A violation at level `k` is witnessed by `E = A ∪ {k-1}`, `F = A ∪ {k}`
/// with `A = {0, ..., k-2}`.
pub fn distortion_submodularity(g: &DistortionFunction, n: usize, tol: f64) -> Verdict {
    let grid = g.grid(n);
    let mut worst = 0.0_f64;
    let mut first = None;
    for k in 1..n {
        let excess = grid[k + 1] + grid[k - 1] - 2.0 * grid[k];
        worst = worst.max(excess);
        if first.is_none() && excess > tol {
            first = Some(k);
        }
    }
    let name = "is_submodular";
    match first {
        None => Verdict::new(name, Outcome::Pass, n.saturating_sub(1) as u64, 0)
            .with_residual(worst)
            .with_note("certified by concavity of g on the k/n grid"),
        Some(k) => {
            let base = (1usize << (k - 1)) - 1;
            let e = base | (1 << (k - 1));
            let f = base | (1 << k);
            Verdict::new(name, Outcome::Fail, n as u64 - 1, 0)
                .with_residual(worst)
                .with_witness(
                    Witness::new()
                        .scalar("E", e as f64)
                        .scalar("F", f as f64)
                        .scalar("k", k as f64),
                )
        }
    }
}

/// Random nondecreasing piecewise-linear map, applied to `t`.
fn monotone_transform(rng: &mut impl Rng, t: &[f64]) -> Vec<f64> {
    let intercept = rng.random_range(-2.0..=2.0);
    let base: f64 = if rng.random_bool(0.2) {
        0.0
    } else {
        rng.random_range(0.0..=3.0)
    };
    let kinks: Vec<(f64, f64)> = (0..rng.random_range(0..=4))
        .map(|_| {
            let at = rng.random_range(-1.0..=1.0);
            let slope = if rng.random_bool(0.3) {
                0.0
            } else {
                rng.random_range(-base.min(1.0)..=3.0)
            };
            (at, slope.max(-base))
        })
        .collect();
    t.iter()
        .map(|&s| {
            // Slope on every piece stays >= 0: extra slopes are clipped so the
            // running slope never drops below zero.
            let mut slope = base;
            let mut value = intercept + base * (s + 1.0);
            let mut kinks_sorted = kinks.clone();
            kinks_sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (at, ds) in kinks_sorted {
                let ds = ds.max(-slope);
                if s > at {
                    value += ds * (s - at);
                }
                slope += ds;
            }
            value
        })
        .collect()
}

/// Randomized check that `E_c[X + Y] = E_c[X] + E_c[Y]` on comonotone pairs
/// `X = u(T)`, `Y = v(T)` with `u`, `v` nondecreasing.
pub fn comonotonic_additivity_check(
    c: &CapacitySource,
    space: SampleSpace,
    trials: u64,
    seed: u64,
    tol: f64,
) -> Result<Verdict> {
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    if let Some(n) = c.atoms() {
        if n != space.n() {
            return Err(Error::SpaceMismatch {
                left: n,
                right: space.n(),
            });
        }
    }
    let name = "comonotonic_additivity";
    let mut worst = 0.0_f64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let t: Vec<f64> = (0..space.n())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        let x = RandomVariable::new(monotone_transform(&mut rng, &t))?;
        let y = RandomVariable::new(monotone_transform(&mut rng, &t))?;
        let sum = &x + &y;
        let (cx, cy, cs) = (c.choquet(&x)?, c.choquet(&y)?, c.choquet(&sum)?);
        let residual = (cs - cx - cy).abs();
        worst = worst.max(residual);
        if residual > tol {
            return Ok(Verdict::new(name, Outcome::Fail, trial + 1, seed)
                .with_residual(worst)
                .with_witness(
                    Witness::at_trial(trial)
                        .vector("X", &x)
                        .vector("Y", &y)
                        .scalar("E_c[X]", cx)
                        .scalar("E_c[Y]", cy)
                        .scalar("E_c[X+Y]", cs),
                ));
        }
    }
    Ok(Verdict::new(name, Outcome::Pass, trials, seed).with_residual(worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[f64]) -> RandomVariable {
        RandomVariable::new(v.to_vec()).unwrap()
    }

    fn space(n: usize) -> SampleSpace {
        SampleSpace::new(n).unwrap()
    }

    fn square() -> DistortionFunction {
        DistortionFunction::sampled(|u| u * u, 4).unwrap()
    }

    #[test]
    fn distortion_validation() {
        assert!(DistortionFunction::new(vec![[0.0, 0.0]]).is_err());
        assert!(DistortionFunction::new(vec![[0.0, 0.1], [1.0, 1.0]]).is_err());
        assert!(
            DistortionFunction::new(vec![[0.0, 0.0], [0.5, 0.6], [0.4, 0.7], [1.0, 1.0]]).is_err()
        );
        assert!(
            DistortionFunction::new(vec![[0.0, 0.0], [0.5, 0.6], [0.7, 0.5], [1.0, 1.0]]).is_err()
        );
        let g = DistortionFunction::new(vec![[0.0, 0.0], [0.5, 0.25], [1.0, 1.0]]).unwrap();
        assert_eq!(g.eval(0.5), 0.25);
        assert_eq!(g.eval(0.25), 0.125);
        assert!(!g.is_concave(0.0));
        assert!(
            DistortionFunction::new(vec![[0.0, 0.0], [0.5, 1.0], [1.0, 1.0]])
                .unwrap()
                .is_concave(0.0)
        );
    }

    #[test]
    fn capacity_from_distortion_examples() {
        let p = Capacity::from_distortion(&DistortionFunction::identity(), space(4)).unwrap();
        for mask in 0..16usize {
            assert_eq!(p.value(mask), mask.count_ones() as f64 / 4.0);
        }
        let c = Capacity::from_distortion(&square(), space(4)).unwrap();
        assert_eq!(c.value(0b0011), 0.25);
        assert!(matches!(
            Capacity::from_distortion(&square(), space(21)),
            Err(Error::CapacitySize { n: 21, .. })
        ));
    }

    #[test]
    fn capacity_validation() {
        assert!(Capacity::new(1, vec![0.0, 1.0]).is_ok());
        assert!(Capacity::new(1, vec![0.1, 1.0]).is_err());
        assert!(Capacity::new(2, vec![0.0, 0.7, 0.2, 0.6]).is_err());
        assert!(Capacity::new(2, vec![0.0, 0.5, 0.5]).is_err());
    }

    #[test]
    fn capacity_json_round_trip() {
        let c = Capacity::new(2, vec![0.0, 0.3, 0.6, 1.0]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"n":2,"table":{"0":0.0,"1":0.3,"2":0.6,"3":1.0}}"#);
        assert_eq!(serde_json::from_str::<Capacity>(&s).unwrap(), c);
        assert!(serde_json::from_str::<Capacity>(r#"{"n":1,"table":{"0":0}}"#).is_err());
        let g: DistortionFunction =
            serde_json::from_str(r#"{"knots": [[0,0],[0.5,0.8],[1,1]]}"#).unwrap();
        assert_eq!(g.eval(0.5), 0.8);
    }

    #[test]
    fn choquet_examples() {
        let p = Capacity::probability(space(3)).unwrap();
        let x = rv(&[4.0, -1.0, 0.5]);
        assert!((choquet_integral(&p, &x).unwrap() - x.expectation()).abs() < 1e-15);

        let c = Capacity::new(3, vec![0.0, 0.1, 0.2, 0.5, 0.3, 0.6, 0.7, 1.0]).unwrap();
        let ind = RandomVariable::indicator(space(3), &[0, 2]);
        assert_eq!(choquet_integral(&c, &ind).unwrap(), c.value(0b101));

        let g = DistortionFunction::new(vec![[0.0, 0.0], [0.5, 0.25], [1.0, 1.0]]).unwrap();
        assert_eq!(choquet_integral(&g, &rv(&[2.0, 1.0])).unwrap(), 1.25);
        let table = Capacity::from_distortion(&g, space(2)).unwrap();
        assert_eq!(choquet_integral(&table, &rv(&[2.0, 1.0])).unwrap(), 1.25);

        assert!(matches!(
            choquet_integral(&p, &rv(&[1.0, 2.0])),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn submodularity_examples() {
        let p = Capacity::probability(space(4)).unwrap();
        assert_eq!(is_submodular(&p, 1e-12).unwrap().outcome, Outcome::Pass);

        let concave = DistortionFunction::new(vec![[0.0, 0.0], [0.5, 1.0], [1.0, 1.0]]).unwrap();
        let c = Capacity::from_distortion(&concave, space(4)).unwrap();
        assert_eq!(is_submodular(&c, 1e-12).unwrap().outcome, Outcome::Pass);

        let c = Capacity::from_distortion(&square(), space(4)).unwrap();
        let v = is_submodular(&c, 1e-12).unwrap();
        assert_eq!(v.outcome, Outcome::Fail);
        let w = v.witness.unwrap();
        let (e, f) = (
            w.get_scalar("E").unwrap() as usize,
            w.get_scalar("F").unwrap() as usize,
        );
        assert!(c.value(e | f) + c.value(e & f) > c.value(e) + c.value(f) + 1e-12);

        let big = Capacity::probability(space(15)).unwrap();
        assert!(matches!(
            is_submodular(&big, 1e-12),
            Err(Error::CapacitySize { .. })
        ));
    }

    #[test]
    fn distortion_submodularity_matches_table() {
        for g in [
            square(),
            DistortionFunction::identity(),
            DistortionFunction::sampled(f64::sqrt, 8).unwrap(),
        ] {
            for n in 2..=6 {
                let table = Capacity::from_distortion(&g, space(n)).unwrap();
                assert_eq!(
                    distortion_submodularity(&g, n, 1e-12).outcome,
                    is_submodular(&table, 1e-12).unwrap().outcome
                );
            }
        }
        let v = distortion_submodularity(&square(), 4, 1e-12);
        let w = v.witness.unwrap();
        let table = Capacity::from_distortion(&square(), space(4)).unwrap();
        let (e, f) = (
            w.get_scalar("E").unwrap() as usize,
            w.get_scalar("F").unwrap() as usize,
        );
        assert!(table.value(e | f) + table.value(e & f) > table.value(e) + table.value(f));
    }

    #[test]
    fn comonotonic_examples() {
        let s = space(6);
        let p = CapacitySource::Table(Capacity::probability(s).unwrap());
        assert_eq!(
            comonotonic_additivity_check(&p, s, 50, 1, 1e-10)
                .unwrap()
                .outcome,
            Outcome::Pass
        );
        let g = CapacitySource::Distortion(square());
        let v = comonotonic_additivity_check(&g, s, 500, 2, 1e-10).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        assert_eq!(v.trials, 500);
        assert!(comonotonic_additivity_check(&g, s, 0, 2, 1e-10).is_err());
    }

    #[test]
    fn monotone_transform_is_nondecreasing() {
        let mut rng = trial_rng(9, 0);
        for _ in 0..200 {
            let mut t: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..=1.0)).collect();
            t.sort_by(f64::total_cmp);
            let u = monotone_transform(&mut rng, &t);
            assert!(u.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{u:?}");
        }
    }
}
