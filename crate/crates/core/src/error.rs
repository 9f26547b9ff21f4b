use thiserror::Error;

/// Errors produced by indicator computations, model validation and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma {0} outside [0, 1]")]
    GammaOutOfRange(f64),

    #[error("invalid weighting function: {0}")]
    InvalidWeighting(String),

    #[error("invalid fuzzy number: {0}")]
    InvalidFuzzyNumber(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid utility: {0}")]
    InvalidUtility(String),

    #[error("wealth {wealth} outside utility domain ({lo}, {hi})")]
    UtilityDomain { wealth: f64, lo: f64, hi: f64 },

    #[error("utility arity mismatch: expected {expected} arguments, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate problem: {0}")]
    Degenerate(String),

    #[error("no interior optimum: {0}")]
    NoInteriorOptimum(String),

    #[error("solver failed: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
