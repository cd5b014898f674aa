//! Outcome records for property checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::numeric::ExtReal;
use crate::space::RandomVariable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    Pass,
    Fail,
    /// `φ(X) = a E[X] + φ(0)` on every tested point.
    CollapseToMean,
    /// `φ(X) = φ(E[X])` on every tested point.
    CollapseThroughMean,
    NoAffineDirection,
    /// Premises held but the theorem's conclusion did not.
    Inconsistent,
    /// A precondition failed and the check did not run.
    Refused,
}

impl Outcome {
    pub const ALL: [Outcome; 7] = [
        Outcome::Pass,
        Outcome::Fail,
        Outcome::CollapseToMean,
        Outcome::CollapseThroughMean,
        Outcome::NoAffineDirection,
        Outcome::Inconsistent,
        Outcome::Refused,
    ];

    pub fn is_failure(self) -> bool {
        matches!(self, Outcome::Fail | Outcome::Inconsistent)
    }
}

/// Concrete inputs and values behind a verdict. `trial` identifies the
/// random stream that produced it, when it came from a random draw.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vectors: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scalars: BTreeMap<String, ExtReal>,
}

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn at_trial(trial: u64) -> Self {
        Witness {
            trial: Some(trial),
            ..Self::default()
        }
    }

    pub fn vector(mut self, key: &str, x: &RandomVariable) -> Self {
        self.vectors.insert(key.to_string(), x.values().to_vec());
        self
    }

    pub fn scalar(mut self, key: &str, v: f64) -> Self {
        self.scalars.insert(key.to_string(), ExtReal(v));
        self
    }

    pub fn get_vector(&self, key: &str) -> Option<RandomVariable> {
        self.vectors
            .get(key)
            .and_then(|v| RandomVariable::new(v.clone()).ok())
    }

    pub fn get_scalar(&self, key: &str) -> Option<f64> {
        self.scalars.get(key).map(|v| v.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub max_residual: ExtReal,
    pub trials: u64,
    pub seed: u64,
    /// Fitted slope `a` for collapse outcomes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn new(name: &str, outcome: Outcome, trials: u64, seed: u64) -> Self {
        Verdict {
            name: name.to_string(),
            outcome,
            witness: None,
            max_residual: ExtReal(0.0),
            trials,
            seed,
            slope: None,
            note: None,
        }
    }

    pub fn with_residual(mut self, r: f64) -> Self {
        self.max_residual = ExtReal(r);
        self
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_slope(mut self, a: f64) -> Self {
        self.slope = Some(a);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_failure(&self) -> bool {
        self.outcome.is_failure()
    }

    pub fn residual(&self) -> f64 {
        self.max_residual.0
    }
}
