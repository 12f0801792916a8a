//! Finite-dimensional JB*-algebras: Jordan products and U-operators, the
//! projection lattice, comparison of projections, centre-valued traces, and
//! bounded finitely additive measures on projections with their quasi-linear
//! extension.
//!
//! Algebras are finite direct sums of `Mₙ(ℂ)`, `Sₙ(ℂ)`, spin factors and the
//! complexified Albert algebra, named by descriptors such as `"m3+spin4+albert"`.
//! The [`verify`] module runs the named suites behind the `jbstar` binary.

pub mod albert;
pub mod algebra;
pub mod comparison;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod measures;
pub mod octonion;
pub mod sampling;
pub mod traces;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/algebras.md")]
mod algebras {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/spectra.md")]
mod spectra {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/lattice.md")]
mod lattice_chapter {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/comparison.md")]
mod comparison_chapter {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/traces.md")]
mod traces_chapter {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/measures.md")]
mod measures_chapter {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/counterexamples.md")]
mod counterexamples {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/suites.md")]
mod suites {}
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
