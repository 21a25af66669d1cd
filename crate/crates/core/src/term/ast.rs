use std::fmt;

use num::Signed;

use crate::epoly::{Rational, VarId};

/// A term of the exponential differential language.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Term {
    Rat(Rational),
    Var(VarId),
    Add(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Pow(Box<Term>, u32),
    /// The exponential `E(·)`.
    Exp(Box<Term>),
    /// The derivation `D(·)`.
    D(Box<Term>),
    Inv(Box<Term>),
}

#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn int(n: i64) -> Term {
        Term::Rat(Rational::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Term {
        Term::Var(VarId::new(name))
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(Term::Neg(Box::new(b))))
    }

    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Term, n: u32) -> Term {
        Term::Pow(Box::new(a), n)
    }

    pub fn exp(a: Term) -> Term {
        Term::Exp(Box::new(a))
    }

    pub fn d(a: Term) -> Term {
        Term::D(Box::new(a))
    }

    pub fn inv(a: Term) -> Term {
        Term::Inv(Box::new(a))
    }

    /// Largest number of `D`s stacked above any variable, counting the
    /// variable's own derivative order.
    pub fn d_depth(&self) -> u32 {
        match self {
            Term::Rat(_) => 0,
            Term::Var(v) => v.order(),
            Term::Add(a, b) | Term::Mul(a, b) => a.d_depth().max(b.d_depth()),
            Term::Neg(a) | Term::Pow(a, _) | Term::Exp(a) | Term::Inv(a) => a.d_depth(),
            Term::D(a) => 1 + a.d_depth(),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Term::Add(..) => 0,
            Term::Mul(..) => 1,
            Term::Neg(_) | Term::Pow(..) => 2,
            _ => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        let wrap = self.level() < min_level;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Term::Rat(q) => {
                if q.is_negative() {
                    // Not produced by the parser; printed so that it reads back
                    // as the negation of a literal.
                    write!(f, "(-{})", -q)?;
                } else {
                    write!(f, "{q}")?;
                }
            }
            Term::Var(v) => write!(f, "{v}")?,
            Term::Add(a, b) => {
                a.write_at(f, 0)?;
                match b.as_ref() {
                    Term::Neg(c) => {
                        f.write_str(" - ")?;
                        c.write_at(f, 1)?;
                    }
                    _ => {
                        f.write_str(" + ")?;
                        b.write_at(f, 1)?;
                    }
                }
            }
            Term::Mul(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" * ")?;
                b.write_at(f, 2)?;
            }
            Term::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 2)?;
            }
            Term::Pow(a, n) => {
                a.write_at(f, 3)?;
                write!(f, "^{n}")?;
            }
            Term::Exp(a) => write_call(f, "E", a)?,
            Term::D(a) => write_call(f, "D", a)?,
            Term::Inv(a) => write_call(f, "inv", a)?,
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, arg: &Term) -> fmt::Result {
    f.write_str(name)?;
    f.write_str("(")?;
    arg.write_at(f, 0)?;
    f.write_str(")")
}

/// Prints with the minimal parentheses needed to parse back to the same tree.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Relation {
    /// `term = 0`
    Eq,
    /// `term != 0`
    Ne,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Atom {
    pub term: Term,
    pub rel: Relation,
}

/// A nonempty conjunction of atoms `t = 0` / `t != 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Formula {
    pub atoms: Vec<Atom>,
}

impl Formula {
    pub fn d_depth(&self) -> u32 {
        self.atoms
            .iter()
            .map(|a| a.term.d_depth())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.rel {
            Relation::Eq => "=",
            Relation::Ne => "!=",
        };
        write!(f, "{} {rel} 0", self.term)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}
