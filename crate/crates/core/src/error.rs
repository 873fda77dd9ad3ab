use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("half-axes must satisfy a1 > a2 >= ... >= ad > 0 for a unique diameter (got a1={a1}, a2={a2})")]
    NonUniqueAxis { a1: f64, a2: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("smallest principal curvature {kappa} does not exceed 1/(2a) = {bound}")]
    Lemma1Violated { kappa: f64, bound: f64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry})")]
    NotSymmetric { asymmetry: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Pearson Type II parameter beta must be > -1 (got {0})")]
    BetaOutOfRange(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("need at least {k} pairs, cloud only has {available}")]
    NotEnoughPairs { k: usize, available: usize },

    #[error("a limit Poisson process realization was empty")]
    EmptyProcess,

    #[error("intensity does not match the region: {0}")]
    IntensityMismatch(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
