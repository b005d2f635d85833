//! Exact engine for a twisted variant of Wilson's functional equation on
//! finite semigroups,
//!
//! ```text
//!     f(xy) + mu(y) * f(sigma(y) x) = 2 f(x) g(y)      for all x, y in S,
//! ```
//!
//! where `sigma` is an automorphism of `S` (not assumed involutive) and `mu`
//! is a multiplicative weight with `mu(x * sigma(x)) = 1` for every `x`.
//!
//! All finite-semigroup computations are exact: scalars live in cyclotomic
//! fields over the rationals ([`cyclotomic`]), linear algebra is fraction-free
//! Gaussian elimination over those fields ([`linalg`]), and the solution
//! theory (multiplicative functions, ideal decompositions, solution families,
//! conformance oracles) is built on top ([`characters`], [`wilson`]).
//! [`catalog`] adds deterministic reports and a Cayley-table text format, and
//! [`continuous`] reproduces four classical Lie-group instances of the same
//! equation in floating point as a sampled sanity bench.

pub mod catalog;
pub mod characters;
pub mod continuous;
pub mod cyclotomic;
pub mod linalg;
pub mod semigroup;
pub mod wilson;

pub use cyclotomic::{CycNumber, Rational};
pub use semigroup::{Automorphism, ElementSubset, FiniteSemigroup};
pub use wilson::WilsonContext;
