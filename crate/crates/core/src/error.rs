use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("not invertible: lowest coefficient is {0}, expected +1 or -1")]
    NotInvertible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("hd exceeds 1: Ext^{degree} is nonzero in weight {weight:?}")]
    HomologicalDimension { degree: usize, weight: [i64; 3] },

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("module is not multiplicity-free (weight {weight:?}, color {color}); use the finite-field oracle")]
    NotMultiplicityFree { weight: [i64; 3], color: u32 },

    #[error("module is a truncation of an infinite module; {0} requires a finite module")]
    Truncated(&'static str),

    #[error("Ext^1 not finite")]
    ExtNotFinite,

    #[error("oracle cap exceeded: {0}")]
    CapExceeded(String),

    #[error("non-polynomial count: {0}")]
    NonPolynomialCount(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
