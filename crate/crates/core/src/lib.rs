//! Exact computations with Stanley decompositions of monomial quotients `I/J`
//! over localized polynomial rings `S_f = K[x_1, …, x_n][x_j^{-1} : j ∈ A]`.
//!
//! Everything is coefficient free: a monomial quotient has the monomials of
//! `I \ J` as a K-basis, so all objects are sets of exponent vectors.
//!
//! - [`ring`]: ring contexts, signed monomials and normalized monomial ideals.
//! - [`stanley`]: Stanley spaces and decompositions, exact verification,
//!   localization and adjunction of variables.
//! - [`solver`]: exact Stanley depth through the characteristic poset.
//! - [`hilbert`]: the absolute-degree Hilbert series `H(M, d) = #{a : |a| = d}`.
//! - [`filtration`]: prime filtrations and fdepth.
//! - [`syntax`]: text syntax for rings, monomials, ideals and decompositions.

pub mod error;
pub mod filtration;
pub mod hilbert;
pub mod ring;
pub mod solver;
pub mod stanley;
pub mod syntax;

pub use error::{Error, Result};
pub use filtration::{PrimeFiltration, Step};
pub use hilbert::HilbertSeries;
pub use ring::{Monomial, MonomialIdeal, RingContext};
pub use stanley::{Region, StanleyDecomposition, StanleySpace, VerificationReport};

/// Largest exponent magnitude accepted from external input.
pub const MAX_EXPONENT: i64 = 1 << 31;

/// Default node budget for the exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
