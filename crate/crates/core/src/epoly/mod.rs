//! Exact arithmetic in the free partial E-ring ℚ[X]^E.
//!
//! `E` is defined symbolically only on elements with zero rational constant,
//! i.e. the base ring ℚ carries the trivial exponential domain `{0}`.

mod display;
mod layers;
mod ordinal;
mod poly;
mod ring;
mod var;

pub use layers::{layer_decompose, ord, ord_reduce, rank_component};
pub use ordinal::OrdinalCNF;
pub use poly::{Monomial, Poly};
pub use ring::{compare_canonical, EPoly};
pub use var::VarId;

/// Arbitrary-precision rational numbers, always in lowest terms.
pub type Rational = num::BigRational;
