//! Truncated generalized-Laguerre series for the matrix exponential `e^{At}` of a stable
//! matrix, with a choice of scale `τ` and order `α` that minimizes a spectral error functional
//! and certified bounds on the L2 approximation error.

pub mod bench;
pub mod error;
pub mod io;
pub mod matrix;
pub mod scalar;
pub mod spectrum;
pub mod sum;

pub use error::{Error, Result};

/// The guide's Rust snippets, compiled and run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/basis.md")]
    pub struct Basis;
    #[doc = include_str!("../../../book/src/coefficients.md")]
    pub struct Coefficients;
    #[doc = include_str!("../../../book/src/error-functional.md")]
    pub struct ErrorFunctional;
    #[doc = include_str!("../../../book/src/parameter-choice.md")]
    pub struct ParameterChoice;
    #[doc = include_str!("../../../book/src/matrices-and-bounds.md")]
    pub struct MatricesAndBounds;
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    pub struct Benchmarks;
    #[doc = include_str!("../../../book/src/numerics.md")]
    pub struct Numerics;
}
