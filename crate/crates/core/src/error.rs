//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("one-dimensional regime: the radial kernel reduction requires N >= 2")]
    DimensionOne,

    #[error("double-critical case p(N-2) = N+alpha: {0}")]
    DoubleCritical(String),

    #[error("singular kernel diagonal: K^R_{{alpha,N}}(r,r) diverges for alpha <= 1")]
    SingularDiagonal,

    #[error("eigenvalue-critical exponent q = 2(2p+alpha)/(2+alpha): {0}")]
    EigenvalueCritical(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("kernel matrix size {m} exceeds the cap {cap}; lower m or raise the cap explicitly")]
    KernelTooLarge { m: usize, cap: usize },

    #[error("solver did not converge: {0}")]
    Nonconvergence(String),

    #[error("boundary mass violation: |u(r_max)| = {boundary:.3e} exceeds {limit:.3e} * max|u|; enlarge r_max")]
    BoundaryMass { boundary: f64, limit: f64 },

    #[error("assertion failed: {0}")]
    CheckFailed(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
