use thiserror::Error;

/// Errors produced by model construction and the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("degenerate Q = Q11*Q22 - Q12^2 = 0: steady-state exponent undefined")]
    DegenerateQ,
    #[error("degenerate Q11 = Dpp + Dqq = 0")]
    DegenerateQ11,
    #[error("degenerate denominator in perturbative eigenvalue expression")]
    DegenerateDenominator,
    #[error("trivial case: {0}")]
    TrivialCase(String),
    #[error("case precondition violated: {0}")]
    ConstraintViolated(String),
    #[error("Q11 and Q22 have opposite signs; rescaled case undefined")]
    NegativeRatio,
    #[error("matrix not symmetric (max asymmetry {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },
    #[error("input `{0}` must be positive")]
    NonPositiveInput(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("stationary covariance is not positive definite (eigenvalue {eigenvalue:e})")]
    NotStationary { eigenvalue: f64 },
    #[error("covariance matrix singular or not invertible")]
    SingularCovariance,
    #[error("covariance not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("not enough samples in fit window: need {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("non-positive distance at t = {t} cannot be log-fitted")]
    NonPositiveDistance { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
