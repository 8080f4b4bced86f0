//! Small convex-optimization toolkit: golden-section search, distance to a
//! subspace, norm-ratio extremization and a dense simplex LP.

pub mod gain;
pub mod golden;
pub mod lp;
mod search;
pub mod subspace;

use serde::{Deserialize, Serialize};

pub use gain::{extremize_gain, extremize_ratio, GainResult};
pub use golden::minimize_1d_convex;
pub use subspace::minimize_over_subspace;

/// How a minimum was obtained. Only `ExactLp` and `LeastSquares` are
/// certified; the others report upper bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactLp,
    LeastSquares,
    GoldenSection,
    SmoothDescent,
    PatternSearch,
}

impl Method {
    pub fn is_certified(self) -> bool {
        matches!(self, Method::ExactLp | Method::LeastSquares)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinResult<A> {
    pub argmin: A,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub method: Method,
}

impl<A> MinResult<A> {
    pub fn certified(&self) -> bool {
        self.method.is_certified()
    }
}

/// Default tolerances.
pub const TOL_1D: f64 = 1e-8;
pub const TOL_MULTI: f64 = 1e-6;
pub const TOL_LP: f64 = 1e-10;
