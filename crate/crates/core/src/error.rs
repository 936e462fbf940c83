//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors raised by the library.
///
/// `InvariantBreach` signals a broken internal certificate (a theorem-backed
/// identity failed to verify); everything else is an input problem.
#[derive(Debug, Error)]
pub enum Error {
    #[error("exponent vectors have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("exponent vectors have different degrees: {0} vs {1}")]
    DegreeMismatch(u32, u32),

    #[error("vector addition leaves the nonnegative orthant at index {0}")]
    NegativeEntry(usize),

    #[error("expected {expected} variables, got {got}")]
    VariableCountMismatch { expected: usize, got: usize },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("ideal carries term order {got}, expected {expected}")]
    OrderMismatch { expected: String, got: String },

    #[error("set mixes exponent vectors of different degrees")]
    MixedDegrees,

    #[error("set is not Borel: {0}")]
    NotBorel(String),

    #[error("monomial ideal is not Borel")]
    NotBorelIdeal,

    #[error("index {0} out of range {1}")]
    IndexOutOfRange(usize, usize),

    #[error("argument out of range: {0}")]
    ArgumentOutOfRange(String),

    #[error("numeric function is not admissible: {0}")]
    InadmissibleFunction(String),

    #[error("polynomial is not an admissible Hilbert polynomial: {0}")]
    InadmissiblePolynomial(String),

    #[error("Hilbert function table too short to certify stabilization")]
    StabilizationUncertified,

    #[error("invalid binomial system: {0}")]
    InvalidSystem(String),

    #[error("binomial system classification too weak: need {need}, got {got}")]
    ClassificationTooWeak { need: String, got: String },

    #[error("generic initial ideal trials disagree after resampling")]
    GinTrialsDisagree,

    #[error("input outside the supported quotient families: {0}")]
    OutOfFamily(String),

    #[error("connecting-sequence construction failed: {0}")]
    SequenceConstruction(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("internal invariant breach: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = std::result::Result<T, Error>;
