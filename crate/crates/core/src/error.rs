use thiserror::Error;

/// Errors raised by measure construction, geometric queries and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires dimension {expected}, measure has dimension {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("empty measure: at least one atom is required")]
    Empty,

    #[error("alpha = {0} is outside (0, 1]")]
    InvalidAlpha(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("half-space has zero mass")]
    ZeroMass,

    #[error("degenerate measure: {0}")]
    Degenerate(String),

    #[error("no dual direction: {0}")]
    NoDual(String),

    #[error("point lies outside the support (depth {depth:e})")]
    OutsideSupport { depth: f64 },

    #[error("solver did not converge (residual {residual:e})")]
    NotConverged { residual: f64 },

    #[error("no point has the requested coordinates: {0}")]
    NoSolution(String),

    #[error("point is the mean; it has no half-space coordinates")]
    MeanPoint,

    #[error("instance too large for the brute-force oracle: {0}")]
    TooLarge(String),

    #[error("linear program: {0}")]
    Lp(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
