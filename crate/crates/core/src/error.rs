use crate::words::SurfaceSpec;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("surface ({0}) does not support symbolic coding; only (2,3,7) and (3,3,4) do")]
    UnsupportedSurface(SurfaceSpec),

    #[error("surface ({p},{q},{r}) is invalid: {reason}")]
    InvalidSurface { p: u32, q: u32, r: u32, reason: String },

    #[error("word {0} is not admissible on ({1})")]
    Inadmissible(String, SurfaceSpec),

    #[error("words {0} and {1} code the same orbit; use the self-linking operation")]
    SameOrbit(String, String),

    #[error("calibration rejected: {0}")]
    BadCalibration(String),

    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    #[error("no positive word class matches trace {trace} within length {max_len}")]
    NoMonodromyClass { trace: i64, max_len: usize },

    #[error("ambiguous monodromy: {candidates:?} all have trace {trace}")]
    AmbiguousMonodromy { trace: i64, candidates: Vec<String> },

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i64),

    #[error("matrix has trace {0} < 3; not conjugate to a two-letter positive word")]
    NotHyperbolic(i64),

    #[error("matrix is not conjugate to a nonnegative word product")]
    NotPositiveClass,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
