use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("invalid alpha vector: {0}")]
    InvalidAlpha(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("point is not on the requested line: {0}")]
    OffLine(String),

    #[error("infeasible nested instance: {0}")]
    Infeasible(String),

    #[error("factorization is unrestricted: col(B) is not contained in col(A)")]
    Unrestricted,

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("symbolic limit exceeded: n = {n} > {limit}")]
    SymbolicLimit { n: usize, limit: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
