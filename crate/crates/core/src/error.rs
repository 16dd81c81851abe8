use thiserror::Error;

/// Errors raised by the operator algebra, game model, SDP engine and planners.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid space list: {0}")]
    InvalidSpaces(String),

    #[error("label `{0}` appears on both sides of a tensor product")]
    LabelCollision(String),

    #[error("unknown space label `{0}`")]
    UnknownLabel(String),

    #[error("{0} is not a permutation of the operator's labels")]
    NotPermutation(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (drift {drift:.3e})")]
    NotHermitian { drift: f64 },

    #[error("{what} is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { what: String, min_eigenvalue: f64 },

    #[error("{what} has trace {trace}, expected 1")]
    NotNormalized { what: String, trace: f64 },

    #[error("channel is not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("eigensolver failed to converge")]
    EigenFailure,

    #[error("total dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("measurement operators do not sum to the identity (deviation {deviation:.3e})")]
    IncompleteMeasurement { deviation: f64 },

    #[error("inconsistent game: {0}")]
    InconsistentGame(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("expected {expected} outcomes, found {found}")]
    OutcomeCount { expected: usize, found: usize },

    #[error("operator is not diagonal: {0}")]
    NonDiagonal(String),

    #[error("blocks do not commute: {0}")]
    NonCommuting(String),

    #[error("infeasible point: {constraint} (residual {residual:.3e})")]
    InfeasiblePoint { constraint: String, residual: f64 },

    #[error("input witness is infeasible: {0}")]
    InfeasibleWitness(String),

    #[error("weak duality violated: primal {primal} exceeds dual {dual}")]
    WeakDualityViolated { primal: f64, dual: f64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("tolerance {0:e} outside [1e-10, 1e-2]")]
    InvalidTolerance(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("threshold condition fails: beta {beta} vs 2^(-H(alpha)/alpha) = {threshold} (alpha {alpha})")]
    ThresholdCondition { alpha: f64, beta: f64, threshold: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
