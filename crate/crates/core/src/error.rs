use thiserror::Error;

use crate::scalar::Vector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid exponent p = {0}; need p >= 1")]
    InvalidExponent(f64),

    #[error("invalid norm specification: {0}")]
    InvalidSpec(String),

    #[error("invalid embedding specification: {0}")]
    InvalidEmbedding(String),

    #[error("complex vectors are not supported by {0}")]
    ComplexUnsupported(&'static str),

    #[error("vector has a non-zero imaginary part but the space is real")]
    FieldMismatch,

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("functional vanishes identically (degenerate covector)")]
    DegenerateFunctional,

    #[error("embedding matrix is not hermitian (max defect {0:e})")]
    NotHermitian(f64),

    #[error("form is indefinite: <Phi(x),x> = 0 at a non-zero x")]
    Indefinite { witness: Vector },

    #[error("form is degenerate: non-zero null vector")]
    Degenerate { witness: Vector },

    #[error("linear program: {0}")]
    Lp(#[from] crate::optim::lp::LpError),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
