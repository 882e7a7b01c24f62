use thiserror::Error;

/// Errors raised by instance validation, the spectral layer and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SrqError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("matrix {name} is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { name: &'static str, asymmetry: f64 },
    #[error("matrix {name} is not positive definite (smallest eigenvalue {min_eig:e})")]
    NotPositiveDefinite { name: &'static str, min_eig: f64 },
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector is not of unit norm (norm {0})")]
    NotUnitNorm(f64),
    #[error("eigensolver did not converge")]
    ConvergenceFailure,
    #[error("no eigenvalue within tolerance of zero")]
    EmptyNullspace,
    #[error("precondition violated: {0}")]
    PreconditionViolation(&'static str),
    #[error("failed to bracket the dual multiplier below {eta_cap:e} at mu = {mu}")]
    BracketFailure { mu: f64, eta_cap: f64 },
    #[error("interval [{lo}, {hi}] is narrower than the width floor")]
    DegenerateInterval { lo: f64, hi: f64 },
    #[error("no feasible point")]
    Infeasible,
    #[error("three-point pattern precondition violated")]
    DegenerateTriple,
    #[error("invalid generator spec: {0}")]
    InvalidSpec(&'static str),
}

pub type Result<T> = core::result::Result<T, SrqError>;
