use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is rank deficient (rank {rank} < {expected})")]
    RankDeficient { rank: usize, expected: usize },

    #[error("origin is not an interior point of the body")]
    NotInterior,

    #[error("body has empty interior")]
    EmptyInterior,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("iteration limit reached in {0}")]
    IterationLimit(&'static str),

    #[error("dimension {dim} exceeds the cap {cap} for {what}")]
    DimensionCap {
        what: &'static str,
        dim: usize,
        cap: usize,
    },

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("center coordinate {index} is degenerate ({value:e})")]
    DegenerateCenter { index: usize, value: f64 },

    #[error("sandwich violated: {0}")]
    SandwichViolation(String),

    #[error("witness operator is singular (|det| = {0:e})")]
    SingularWitness(f64),

    #[error("net of {size} points exceeds the budget {budget}")]
    NetTooLarge { size: u128, budget: u128 },

    #[error("linear program is {0}")]
    LpStatus(&'static str),

    #[error("invalid polytope data: {0}")]
    InvalidData(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
