use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Fock truncation discards more weight than the tolerance allows.
    #[error("cutoff {cutoff} too small: retained weight {retained:.3e} below 1 - {tolerance:.0e}")]
    CutoffTooSmall {
        cutoff: usize,
        retained: f64,
        tolerance: f64,
    },

    #[error("degenerate covariance matrix (det = {0:.3e})")]
    DegenerateCovariance(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("size limit exceeded: {what} needs {requested}, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    /// Displacement too large for the Fock truncation to represent faithfully.
    #[error("|alpha| = {alpha:.3} exceeds truncation bound {bound:.3} for cutoff {cutoff}")]
    Truncation {
        alpha: f64,
        bound: f64,
        cutoff: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),
}
