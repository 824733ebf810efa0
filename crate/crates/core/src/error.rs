use thiserror::Error;

/// Errors raised by the permcover library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("degree {n} is below the minimum {min} for {what}")]
    DegreeTooSmall { what: &'static str, n: usize, min: usize },

    #[error("invalid factor profile: {0}")]
    InvalidProfile(String),

    #[error("code has no elements")]
    EmptyCode,

    #[error("{op} is not defined for {kind} codes")]
    WrongKind { op: &'static str, kind: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("element set is not a group: {0}")]
    NotAGroup(String),

    #[error("degree {n} exceeds the configured cap {cap}; pass an explicit override to run anyway")]
    DegreeCap { n: usize, cap: usize },

    #[error("window sets overlap for n={n}, r={radius}: the restricted search needs r > (n-3)/2")]
    WindowsOverlap { n: usize, radius: usize },

    #[error("n={n} is not of the form m(m-1)-2, m(m-1)-1 or m(m-1)")]
    NotRefinedForm { n: usize },

    #[error("n={n} has m={m} <= 5; use the exact search instead of the refined construction")]
    RefinedFallback { n: usize, m: usize },

    #[error("floating-point evaluation is unstable at n={n}")]
    FloatBoundary { n: usize },

    #[error("malformed witness bundle: {0}")]
    MalformedBundle(String),

    #[error("witness verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
