//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unbounded domain {0} requires a truncation radius")]
    MissingTruncation(&'static str),

    #[error("evaluation requested outside the operator domain: {0}")]
    OutsideDomain(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error(
        "support violation: fraction {fraction:.3e} of the squared mass lies below the \
         cutoff t = {cutoff:.6e}; the signal is not in the range of the time change"
    )]
    SupportViolation { cutoff: f64, fraction: f64 },

    #[error(
        "target lies in the orthogonal complement of the principal range \
         (mass below t = {cutoff:.6e}); no boundary control reproduces it"
    )]
    NotInPrincipalRange { cutoff: f64 },

    #[error("divergent functional: {0}")]
    DivergentFunctional(String),

    #[error("ill-conditioned system: condition estimate {0:.3e} exceeds 1e12")]
    IllConditioned(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
