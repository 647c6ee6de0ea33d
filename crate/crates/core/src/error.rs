//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by construction, validation, and evaluation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("probability vector needs at least {min} entries, got {got}")]
    TooFewEntries { min: usize, got: usize },

    #[error("entry {index} is {value}, outside the probability range")]
    EntryOutOfRange { index: usize, value: f64 },

    #[error("entries sum to {sum}, beyond tolerance {tol} of 1")]
    MassOutOfTolerance { sum: f64, tol: f64 },

    #[error("weight {index} is {value}; importance weights must be strictly positive")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("atom mixture needs at least one atom")]
    EmptyMixture,

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "closed-form maximizer leaves the simplex (beta[{index}] = {value}); \
         use the grid oracle for the constrained maximum"
    )]
    ConstrainedMaximum { index: usize, value: f64 },

    #[error("mean-preserving spread needs at least one interior atom")]
    CannotSpread,

    #[error("shift pushes atom {atom} off the simplex (coordinate {index} becomes {value})")]
    InfeasibleShift {
        atom: usize,
        index: usize,
        value: f64,
    },

    #[error("{path}:{line}: {reason}")]
    Schema {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("training diverged (non-finite loss) at learning rate {learning_rate}")]
    Divergence { learning_rate: f64 },

    #[error("unknown measure id `{0}`")]
    UnknownMeasure(String),

    #[error("unknown axiom id `{0}`")]
    UnknownAxiom(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
