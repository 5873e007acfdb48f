//! Exact computational algebra for half-shuffle (zinbiel) expansions on
//! words, double-shuffle relation spaces, and the parametric quotient
//! pipeline built on top of them.
//!
//! Module map:
//! - [`arith`]: arbitrary-precision rationals, dense univariate polynomials,
//!   determinants over polynomial rings, complex root finding.
//! - [`words`]: words over small alphabets, compositions, {2,3}-words,
//!   canonical enumerations and orders.
//! - [`zinbiel`]: the free half-shuffle algebra — products, right combs,
//!   good-shuffle enumeration, parametric generator expansions.
//! - [`echelon`]: exact sparse row reduction over ℚ with deterministic
//!   pivoting.
//! - [`freeness`]: occurrence matrices, triangularity certificates, and
//!   generic freeness probes.
//! - [`relations`]: double-shuffle relation generation, regularization,
//!   echelon spaces with on-disk caching, import/export.
//! - [`quotient`]: transition matrices over ℚ[u], singular polynomials,
//!   B-tables, degenerate image dimensions.

pub mod arith;
pub mod echelon;
pub mod error;
pub mod freeness;
pub mod quotient;
pub mod relations;
pub mod words;
pub mod zinbiel;

pub use error::{Error, Result};
