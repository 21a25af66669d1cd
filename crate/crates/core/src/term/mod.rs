//! Terms and conjunctive formulas with `E`, the derivation `D` and `inv`.

mod ast;
mod normalize;
mod parser;
mod star;

pub use ast::{Atom, Formula, Relation, Term};
pub use normalize::delta_normalize;
pub use parser::{parse_formula, parse_term};
pub use star::{star_transform, term_to_epoly, StarSystem};

/// Parses a term and converts it to a canonical E-polynomial.
pub fn parse_epoly(src: &str) -> crate::Result<crate::EPoly> {
    term_to_epoly(&parse_term(src)?)
}
