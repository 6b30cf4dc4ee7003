use thiserror::Error;

/// Errors produced by the enumeration, moment, oracle and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("length mismatch: i-sequence has length {i_len}, alpha has length {alpha_len}")]
    LengthMismatch { i_len: usize, alpha_len: usize },

    #[error("{what}: requested {needed} exceeds the cap of {cap}")]
    BudgetExceeded { what: &'static str, needed: u128, cap: u128 },

    #[error("tau moment of order {0} is not available")]
    MissingTauMoment(usize),

    #[error("characteristic pair violates the ballot condition or cannot be closed: {0}")]
    Reconstruction(String),

    #[error("numerical breakdown: {0}")]
    Numerical(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("unknown distribution `{0}`")]
    UnknownDistribution(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for errors raised because a configured resource cap was hit.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
