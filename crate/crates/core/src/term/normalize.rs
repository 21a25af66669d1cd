use super::ast::Term;
use crate::error::{Error, Result};

/// Pushes every `D` inward until it applies only to variables.
///
/// Uses additivity, the Leibniz rule, `D(E(a)) = D(a)·E(a)` and `D(q) = 0`
/// for rational literals. A `D` above `inv(·)` is rejected.
pub fn delta_normalize(t: &Term) -> Result<Term> {
    Ok(match t {
        Term::Rat(_) | Term::Var(_) => t.clone(),
        Term::Add(a, b) => Term::add(delta_normalize(a)?, delta_normalize(b)?),
        Term::Mul(a, b) => Term::mul(delta_normalize(a)?, delta_normalize(b)?),
        Term::Neg(a) => Term::neg(delta_normalize(a)?),
        Term::Pow(a, n) => Term::pow(delta_normalize(a)?, *n),
        Term::Exp(a) => Term::exp(delta_normalize(a)?),
        Term::Inv(a) => Term::inv(delta_normalize(a)?),
        Term::D(a) => derive(&delta_normalize(a)?)?,
    })
}

/// `D` of an already normalized term.
fn derive(t: &Term) -> Result<Term> {
    Ok(match t {
        Term::Rat(_) => Term::int(0),
        Term::Var(_) | Term::D(_) => Term::d(t.clone()),
        Term::Add(a, b) => Term::add(derive(a)?, derive(b)?),
        Term::Neg(a) => Term::neg(derive(a)?),
        Term::Mul(a, b) => Term::add(
            Term::mul(derive(a)?, (**b).clone()),
            Term::mul((**a).clone(), derive(b)?),
        ),
        Term::Pow(_, 0) => Term::int(0),
        Term::Pow(a, 1) => derive(a)?,
        Term::Pow(a, n) => Term::mul(
            Term::mul(Term::int(i64::from(*n)), Term::pow((**a).clone(), n - 1)),
            derive(a)?,
        ),
        Term::Exp(a) => Term::mul(derive(a)?, t.clone()),
        Term::Inv(_) => {
            return Err(Error::Unsupported(
                "D applied over inv(·); rewrite the atom without division".into(),
            ))
        }
    })
}
