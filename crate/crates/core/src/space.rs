//! Finite uniform probability spaces and random variables on them.
//!
//! A [`SampleSpace`] is `n` equiprobable atoms. On such a space two random
//! variables are equal in law exactly when one is a permutation of the
//! other, so law invariance reduces to permutation invariance.

use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct SampleSpace {
    n: usize,
}

#[derive(Deserialize)]
struct RawSpace {
    n: usize,
}

impl TryFrom<RawSpace> for SampleSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        SampleSpace::new(raw.n)
    }
}

impl SampleSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewAtoms { n, min: 1 });
        }
        Ok(SampleSpace { n })
    }

    pub fn n(self) -> usize {
        self.n
    }

    /// Probability of a single atom.
    pub fn atom_mass(self) -> f64 {
        1.0 / self.n as f64
    }

    /// Law-invariance and collapse analyses need at least two atoms.
    pub fn require_nontrivial(self) -> Result<Self> {
        if self.n < 2 {
            return Err(Error::TooFewAtoms { n: self.n, min: 2 });
        }
        Ok(self)
    }
}

/// A real-valued random variable on a uniform space of `values.len()` atoms.
///
/// Entries are always finite. Serializes as a bare JSON array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RandomVariable {
    values: Vec<f64>,
}

impl TryFrom<Vec<f64>> for RandomVariable {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        RandomVariable::new(values)
    }
}

impl From<RandomVariable> for Vec<f64> {
    fn from(x: RandomVariable) -> Self {
        x.values
    }
}

impl RandomVariable {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooFewAtoms { n: 0, min: 1 });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(RandomVariable { values })
    }

    /// Builds a variable on `space`, checking the length.
    pub fn on(space: SampleSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.n() {
            return Err(Error::SpaceMismatch {
                left: space.n(),
                right: values.len(),
            });
        }
        Self::new(values)
    }

    pub(crate) fn from_finite(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty() && values.iter().all(|v| v.is_finite()));
        RandomVariable { values }
    }

    pub fn constant(space: SampleSpace, c: f64) -> Self {
        Self::from_finite(vec![c; space.n()])
    }

    pub fn zero(space: SampleSpace) -> Self {
        Self::constant(space, 0.0)
    }

    /// Indicator of the atoms in `atoms`.
    pub fn indicator(space: SampleSpace, atoms: &[usize]) -> Self {
        let mut values = vec![0.0; space.n()];
        for &i in atoms {
            values[i] = 1.0;
        }
        Self::from_finite(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn space(&self) -> SampleSpace {
        SampleSpace {
            n: self.values.len(),
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_constant(&self, tol: f64) -> bool {
        self.max() - self.min() <= tol
    }

    /// `E[X]`, exactly rounded; invariant under permutations of the atoms.
    pub fn expectation(&self) -> f64 {
        numeric::mean(&self.values)
    }

    /// `E[XY]`.
    pub fn dot(&self, other: &RandomVariable) -> Result<f64> {
        check_same_space(self, other)?;
        Ok(numeric::mean_product(&self.values, &other.values))
    }

    /// Ascending order statistics.
    pub fn sorted_values(&self) -> Vec<f64> {
        numeric::sorted(&self.values)
    }

    /// The permutation image `(σX)_i = X_{perm[i]}`.
    pub fn permuted(&self, perm: &[usize]) -> RandomVariable {
        assert_eq!(perm.len(), self.n(), "permutation length mismatch");
        Self::from_finite(perm.iter().map(|&j| self.values[j]).collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RandomVariable {
        Self::from_finite(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, lambda: f64) -> RandomVariable {
        self.map(|v| lambda * v)
    }

    pub fn shifted(&self, m: f64) -> RandomVariable {
        self.map(|v| v + m)
    }

    /// `self + m * direction`.
    pub fn add_scaled(&self, m: f64, direction: &RandomVariable) -> RandomVariable {
        assert_eq!(self.n(), direction.n(), "space mismatch");
        Self::from_finite(
            self.values
                .iter()
                .zip(&direction.values)
                .map(|(x, d)| x + m * d)
                .collect(),
        )
    }
}

impl Add for &RandomVariable {
    type Output = RandomVariable;

    fn add(self, rhs: &RandomVariable) -> RandomVariable {
        self.add_scaled(1.0, rhs)
    }
}

impl Sub for &RandomVariable {
    type Output = RandomVariable;

    fn sub(self, rhs: &RandomVariable) -> RandomVariable {
        self.add_scaled(-1.0, rhs)
    }
}

impl Neg for &RandomVariable {
    type Output = RandomVariable;

    fn neg(self) -> RandomVariable {
        self.map(|v| -v)
    }
}

impl Mul<&RandomVariable> for f64 {
    type Output = RandomVariable;

    fn mul(self, rhs: &RandomVariable) -> RandomVariable {
        rhs.scaled(self)
    }
}

pub(crate) fn check_same_space(x: &RandomVariable, y: &RandomVariable) -> Result<()> {
    if x.n() != y.n() {
        return Err(Error::SpaceMismatch {
            left: x.n(),
            right: y.n(),
        });
    }
    Ok(())
}

pub fn expectation(x: &RandomVariable) -> f64 {
    x.expectation()
}

/// Equality in law with exact comparison of order statistics.
pub fn same_law(x: &RandomVariable, y: &RandomVariable) -> Result<bool> {
    same_law_within(x, y, 0.0)
}

/// Equality in law: sorted values agree entrywise within `tol`.
pub fn same_law_within(x: &RandomVariable, y: &RandomVariable, tol: f64) -> Result<bool> {
    check_same_space(x, y)?;
    Ok(x.sorted_values()
        .iter()
        .zip(y.sorted_values())
        .all(|(a, b)| (a - b).abs() <= tol))
}

pub fn is_constant(x: &RandomVariable, tol: f64) -> bool {
    x.is_constant(tol)
}

/// Distribution descriptors for [`random_variable`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Law {
    /// Continuous uniform on `[a, b]`.
    Uniform { a: f64, b: f64 },
    /// Gaussian with mean `mu` and standard deviation `sigma`.
    Normal { mu: f64, sigma: f64 },
    /// Uniform on the integers `a..=b`.
    Integer { a: i64, b: i64 },
}

impl Law {
    fn validate(&self) -> Result<()> {
        match *self {
            Law::Uniform { a, b } if !(a.is_finite() && b.is_finite()) || a > b => Err(
                Error::InvalidDescriptor(format!("uniform({a}, {b}) needs finite a <= b")),
            ),
            Law::Normal { mu, sigma } if !(mu.is_finite() && sigma.is_finite()) || sigma < 0.0 => {
                Err(Error::InvalidDescriptor(format!(
                    "normal({mu}, {sigma}) needs finite mu and sigma >= 0"
                )))
            }
            Law::Integer { a, b } if a > b => Err(Error::InvalidDescriptor(format!(
                "integer({a}, {b}) needs a <= b"
            ))),
            _ => Ok(()),
        }
    }
}

/// Seeded random variable on `space`.
///
/// Draws come from ChaCha8 keyed by `seed` (stream 0), one draw per atom in
/// atom order, so the output is a pure function of `(seed, law, n)`.
pub fn random_variable(seed: u64, space: SampleSpace, law: Law) -> Result<RandomVariable> {
    law.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = space.n();
    let values: Vec<f64> = match law {
        Law::Uniform { a, b } => (0..n).map(|_| rng.random_range(a..=b)).collect(),
        Law::Normal { mu, sigma } => {
            let normal =
                Normal::new(mu, sigma).map_err(|e| Error::InvalidDescriptor(e.to_string()))?;
            (0..n).map(|_| normal.sample(&mut rng)).collect()
        }
        Law::Integer { a, b } => (0..n).map(|_| rng.random_range(a..=b) as f64).collect(),
    };
    RandomVariable::new(values)
}
