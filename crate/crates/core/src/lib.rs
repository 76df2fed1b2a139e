//! Exact computer algebra for the graded Poisson and Weyl algebras of a
//! single closed orbit, the descendant hierarchies they carry, and the
//! branched-cover counts behind them.

pub mod algebra;
pub mod hierarchy;
pub mod hurwitz;
pub mod json;
pub mod orbits;
pub mod poisson;
pub mod weyl;

pub use algebra::{Monomial, OrbitVariable, Polynomial, Rational, Side};
pub use orbits::OrbitModel;
pub use poisson::SeriesSpec;
pub use weyl::{DElement, WeylElement};

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Model(#[from] orbits::ModelError),
    #[error(transparent)]
    Poisson(#[from] poisson::PoissonError),
    #[error(transparent)]
    Weyl(#[from] weyl::WeylError),
    #[error(transparent)]
    Hierarchy(#[from] hierarchy::HierarchyError),
    #[error(transparent)]
    Hurwitz(#[from] hurwitz::HurwitzError),
    #[error(transparent)]
    Json(#[from] json::JsonError),
}
