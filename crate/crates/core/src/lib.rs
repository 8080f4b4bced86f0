//! Laboratory for finite-dimensional normed spaces: Birkhoff-James
//! orthogonality, dual norms, and verifiers that decide when an embedding of
//! a space into its dual forces an inner-product structure.

pub mod catalog;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod linalg;
pub mod norm;
pub mod optim;
pub mod orthogonality;
pub mod plot;
pub mod scalar;

pub use error::{Error, Result};
pub use norm::{NormSpec, PExponent, Space};
pub use scalar::{Field, Matrix, Vector, C64};
