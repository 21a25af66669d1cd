use std::collections::BTreeSet;
use std::fmt;

use num::One;

use super::ast::{Formula, Relation, Term};
use super::normalize::delta_normalize;
use crate::differential::ERational;
use crate::epoly::{EPoly, Rational, VarId};
use crate::error::{Error, Result};

/// An order-`m` differential formula with every `D^j(x)` replaced by the
/// independent variable `(x, j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StarSystem {
    pub order: u32,
    pub equations: Vec<EPoly>,
    pub inequations: Vec<EPoly>,
}

impl StarSystem {
    /// All variables occurring in the system.
    pub fn variables(&self) -> BTreeSet<VarId> {
        self.equations
            .iter()
            .chain(&self.inequations)
            .flat_map(EPoly::variables)
            .collect()
    }

    /// Base names of the differential indeterminates.
    pub fn bases(&self) -> BTreeSet<String> {
        self.variables()
            .into_iter()
            .map(|v| v.base().to_string())
            .collect()
    }
}

impl fmt::Display for StarSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.equations.iter().map(|e| format!("{e} = 0")).collect();
        parts.extend(self.inequations.iter().map(|e| format!("{e} != 0")));
        f.write_str(&parts.join(" & "))
    }
}

/// Normalizes every atom, replaces `D^j(x)` by `(x, j)` and folds the atoms
/// into E-polynomial equations and inequations.
///
/// Atoms containing `inv(·)` are cleared: `n/d = 0` becomes `n = 0` together
/// with the side condition `d ≠ 0`. The order is the largest `D`-depth of the
/// normalized formula.
pub fn star_transform(phi: &Formula) -> Result<StarSystem> {
    let mut sys = StarSystem {
        order: 0,
        equations: Vec::new(),
        inequations: Vec::new(),
    };
    for atom in &phi.atoms {
        let t = delta_normalize(&atom.term)?;
        sys.order = sys.order.max(t.d_depth());
        let mut side = Vec::new();
        let q = lift(&t, &mut side)?;
        match atom.rel {
            Relation::Eq => sys.equations.push(q.num),
            Relation::Ne => push_inequation(&mut sys.inequations, q.num),
        }
        push_inequation(&mut sys.inequations, q.den);
        for s in side {
            push_inequation(&mut sys.inequations, s);
        }
    }
    Ok(sys)
}

fn push_inequation(out: &mut Vec<EPoly>, p: EPoly) {
    let trivially_nonzero = p
        .as_constant()
        .is_some_and(|c| c != Rational::from_integer(0.into()));
    if !trivially_nonzero && !out.contains(&p) {
        out.push(p);
    }
}

/// Converts a term without `inv` to an E-polynomial, after δ-normalization.
pub fn term_to_epoly(t: &Term) -> Result<EPoly> {
    let t = delta_normalize(t)?;
    let mut side = Vec::new();
    let q = lift(&t, &mut side)?;
    if !q.is_polynomial() || !side.is_empty() {
        return Err(Error::Unsupported(
            "inv(·) is only allowed in formula atoms".into(),
        ));
    }
    Ok(q.num)
}

fn d_chain(t: &Term) -> Option<VarId> {
    match t {
        Term::Var(v) => Some(v.clone()),
        Term::D(a) => d_chain(a).map(|v| v.succ()),
        _ => None,
    }
}

fn lift(t: &Term, side: &mut Vec<EPoly>) -> Result<ERational> {
    let poly = |p| Ok(ERational::from_epoly(p));
    match t {
        Term::Rat(q) => poly(EPoly::constant(q.clone())),
        Term::Var(v) => poly(EPoly::var(v.clone())),
        Term::D(_) => match d_chain(t) {
            Some(v) => poly(EPoly::var(v)),
            None => Err(Error::Unsupported(format!(
                "D over a non-variable in `{t}`"
            ))),
        },
        Term::Add(a, b) => {
            let (a, b) = (lift(a, side)?, lift(b, side)?);
            if a.den == b.den {
                return Ok(ERational {
                    num: &a.num + &b.num,
                    den: a.den,
                });
            }
            Ok(ERational {
                num: &(&a.num * &b.den) + &(&b.num * &a.den),
                den: &a.den * &b.den,
            })
        }
        Term::Neg(a) => {
            let a = lift(a, side)?;
            Ok(ERational {
                num: -a.num,
                den: a.den,
            })
        }
        Term::Mul(a, b) => {
            let (a, b) = (lift(a, side)?, lift(b, side)?);
            Ok(ERational {
                num: &a.num * &b.num,
                den: &a.den * &b.den,
            })
        }
        Term::Pow(a, n) => {
            let a = lift(a, side)?;
            Ok(ERational {
                num: a.num.pow(*n),
                den: a.den.pow(*n),
            })
        }
        Term::Exp(a) => {
            let a = lift(a, side)?;
            if !a.is_polynomial() {
                return Err(Error::Unsupported("E applied to a quotient".into()));
            }
            poly(a.num.exp()?)
        }
        Term::Inv(a) => {
            let a = lift(a, side)?;
            match a.num.as_constant() {
                Some(c) if c == Rational::from_integer(0.into()) => {
                    Err(Error::Domain("inv of 0".into()))
                }
                Some(c) => poly(a.den.scale(&(Rational::one() / c))),
                None => {
                    side.push(a.num.clone());
                    Ok(ERational {
                        num: a.den,
                        den: a.num,
                    })
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_formula, parse_term};

    fn ep(s: &str) -> EPoly {
        term_to_epoly(&parse_term(s).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let s = star_transform(&parse_formula("D(x)*x - 1 = 0").unwrap()).unwrap();
        assert_eq!(s.order, 1);
        assert_eq!(s.equations, vec![ep("x__1 * x - 1")]);
        let s = star_transform(&parse_formula("x^2 - 2 = 0").unwrap()).unwrap();
        assert_eq!((s.order, s.equations.clone()), (0, vec![ep("x^2 - 2")]));
        let s = star_transform(&parse_formula("D(E(x)) - 1 = 0").unwrap()).unwrap();
        assert_eq!(
            (s.order, s.equations.clone()),
            (1, vec![ep("x__1 * E(x) - 1")])
        );
        assert!(s.inequations.is_empty());
    }

    #[test]
    fn d_chains_become_higher_orders() {
        assert_eq!(ep("D(D(x)) + D(x__1)"), ep("2*x__2"));
    }

    #[test]
    fn inv_is_cleared_with_side_condition() {
        let s = star_transform(&parse_formula("inv(x) - 1 = 0 & y != 0").unwrap()).unwrap();
        assert_eq!(s.equations, vec![ep("1 - x")]);
        assert_eq!(s.inequations, vec![ep("x"), ep("y")]);
        assert!(term_to_epoly(&parse_term("inv(x)").unwrap()).is_err());
        assert!(matches!(
            star_transform(&parse_formula("E(1) = 0").unwrap()),
            Err(Error::Domain(_))
        ));
    }
}
