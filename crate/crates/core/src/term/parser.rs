//! Recursive-descent parser for terms and conjunctive formulas.
//!
//! ```text
//! term  := sum
//! sum   := prod (('+'|'-') prod)*
//! prod  := unary ('*' unary)*
//! unary := '-' unary | atom ('^' nat)?
//! atom  := rat | ident | 'E' '(' term ')' | 'D' '(' term ')' | 'inv' '(' term ')' | '(' term ')'
//! rat   := int ('/' posint)?
//! formula := term ('='|'!=') term ('&' term ('='|'!=') term)*
//! ```
//!
//! Formula atoms with a right-hand side other than the literal `0` are stored
//! as `lhs - rhs`.

use num::{BigInt, Zero};

use super::ast::{Atom, Formula, Relation, Term};
use crate::epoly::{Rational, VarId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(&'static str),
}

struct Lexer;

impl Lexer {
    fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
        let bytes = src.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((Tok::Num(n), start));
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            } else {
                let sym = match c {
                    b'+' => "+",
                    b'-' => "-",
                    b'*' => "*",
                    b'^' => "^",
                    b'/' => "/",
                    b'(' => "(",
                    b')' => ")",
                    b'=' => "=",
                    b'&' => "&",
                    b'!' if bytes.get(i + 1) == Some(&b'=') => "!=",
                    _ => {
                        let ch = src[i..].chars().next().unwrap_or('?');
                        return Err(Error::syntax(i, format!("unexpected character `{ch}`")));
                    }
                };
                out.push((Tok::Sym(sym), i));
                i += sym.len();
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: Lexer::tokenize(src)?,
            pos: 0,
            end: src.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(Error::syntax(self.offset(), format!("expected `{sym}`")))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            return Err(Error::syntax(self.offset(), "unexpected trailing input"));
        }
        Ok(())
    }

    fn sum(&mut self) -> Result<Term> {
        let mut t = self.prod()?;
        loop {
            if self.eat("+") {
                t = Term::add(t, self.prod()?);
            } else if self.eat("-") {
                t = Term::sub(t, self.prod()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn prod(&mut self) -> Result<Term> {
        let mut t = self.unary()?;
        while self.eat("*") {
            t = Term::mul(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term> {
        if self.eat("-") {
            return Ok(Term::neg(self.unary()?));
        }
        let a = self.atom()?;
        if self.eat("^") {
            let at = self.offset();
            let n = match self.peek() {
                Some(Tok::Num(n)) => {
                    u32::try_from(n.clone()).map_err(|_| Error::syntax(at, "exponent too large"))?
                }
                _ => return Err(Error::syntax(at, "expected a natural-number exponent")),
            };
            self.pos += 1;
            return Ok(Term::pow(a, n));
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Term> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if self.eat("/") {
                    let dat = self.offset();
                    let d = match self.peek() {
                        Some(Tok::Num(d)) => d.clone(),
                        _ => return Err(Error::syntax(dat, "expected a denominator")),
                    };
                    self.pos += 1;
                    if d.is_zero() {
                        return Err(Error::syntax(dat, "zero denominator"));
                    }
                    Ok(Term::Rat(Rational::new(n, d)))
                } else {
                    Ok(Term::Rat(Rational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let call = |p: &mut Parser| -> Result<Term> {
                    p.expect("(")?;
                    let t = p.sum()?;
                    p.expect(")")?;
                    Ok(t)
                };
                match name.as_str() {
                    "E" => Ok(Term::exp(call(self)?)),
                    "D" => Ok(Term::d(call(self)?)),
                    "inv" => Ok(Term::inv(call(self)?)),
                    _ => VarId::parse(&name)
                        .map(Term::Var)
                        .map_err(|e| Error::syntax(at, e.to_string())),
                }
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let t = self.sum()?;
                self.expect(")")?;
                Ok(t)
            }
            _ => Err(Error::syntax(at, "expected a term")),
        }
    }

    fn atom_formula(&mut self) -> Result<Atom> {
        let lhs = self.sum()?;
        let rel = if self.eat("=") {
            Relation::Eq
        } else if self.eat("!=") {
            Relation::Ne
        } else {
            return Err(Error::syntax(self.offset(), "expected `=` or `!=`"));
        };
        let rhs = self.sum()?;
        let term = match &rhs {
            Term::Rat(q) if q.is_zero() => lhs,
            _ => Term::sub(lhs, rhs),
        };
        Ok(Atom { term, rel })
    }
}

pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = Parser::new(src)?;
    let t = p.sum()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = Parser::new(src)?;
    let mut atoms = vec![p.atom_formula()?];
    while p.eat("&") {
        atoms.push(p.atom_formula()?);
    }
    p.finish()?;
    Ok(Formula { atoms })
}
