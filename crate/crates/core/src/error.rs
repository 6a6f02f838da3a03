use thiserror::Error;

/// Errors raised by the numerical and sampling routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NonConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace is not one (got {0})")]
    InvalidTrace(f64),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation of V^dagger V from identity {0:e})")]
    NotUnitary(f64),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("divergence undefined: p has mass where q vanishes (index {0})")]
    Undefined(usize),

    #[error("support of rho is not contained in support of sigma (weight {0:e} outside)")]
    SupportViolation(f64),

    #[error("argument {0} outside the domain [0, 1]")]
    DomainError(f64),

    #[error("mixedness filter rejected {0} consecutive draws")]
    RejectionBudgetExceeded(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("histogram bin edges differ")]
    EdgeMismatch,

    #[error("parameter block is degenerate (Tr AA^dagger = {0:e})")]
    DegenerateBlock(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
