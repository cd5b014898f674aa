use thiserror::Error;

use crate::verdict::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: {left} atoms vs {right} atoms")]
    SpaceMismatch { left: usize, right: usize },

    #[error("random variable entries must be finite (entry {index} is {value})")]
    NonFinite { index: usize, value: f64 },

    #[error("a sample space needs at least {min} atoms, got {n}")]
    TooFewAtoms { n: usize, min: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid distribution descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("invalid distortion: {0}")]
    InvalidDistortion(String),

    #[error("invalid capacity: {0}")]
    InvalidCapacity(String),

    #[error(
        "capacity table for {n} atoms exceeds the explicit limit of {max}; \
         use the implicit distortion path instead"
    )]
    CapacitySize { n: usize, max: usize },

    #[error("invalid functional: {0}")]
    InvalidFunctional(String),

    #[error("no finite capital requirement: {0}")]
    NoFiniteCapital(String),

    #[error("not affine: domain violation at m = {m}")]
    NotAffine { m: f64 },

    #[error("{check} refused: {reason}")]
    Precondition {
        check: String,
        reason: String,
        witness: Option<Box<Witness>>,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn precondition(check: &str, reason: impl Into<String>) -> Self {
        Error::Precondition {
            check: check.to_string(),
            reason: reason.into(),
            witness: None,
        }
    }

    pub(crate) fn precondition_with(
        check: &str,
        reason: impl Into<String>,
        witness: Witness,
    ) -> Self {
        Error::Precondition {
            check: check.to_string(),
            reason: reason.into(),
            witness: Some(Box::new(witness)),
        }
    }
}
