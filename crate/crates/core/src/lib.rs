//! Exponential polynomials with E-derivations.
//!
//! The crate provides exact arithmetic in the free partial E-ring ℚ[X]^E
//! ([`epoly`]), a term language with a derivation symbol `D` ([`term`]),
//! symbolic E-derivations and Khovanskii systems ([`differential`]), real and
//! p-adic evaluation with Newton/Hensel solving ([`numeric`]), and
//! construction of differential-exponential axiom instances together with a
//! numeric jet search ([`dle`]).

pub mod differential;
pub mod dle;
pub mod epoly;
pub mod error;
pub mod numeric;
pub mod random;
pub mod term;

pub use epoly::{EPoly, Monomial, OrdinalCNF, Poly, Rational, VarId};
pub use error::{Error, Result};
