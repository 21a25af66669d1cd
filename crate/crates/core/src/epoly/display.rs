use std::fmt;

use num::{One, Signed};

use super::{EPoly, Monomial, Rational};

/// Prints in the term grammar, so the output parses back to the same value.
///
/// The polynomial part comes first (higher degrees first), followed by the
/// `E(·)` terms in canonical exponent order.
impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (a, p) in self.terms() {
            let mut monos: Vec<(&Monomial, &Rational)> = p.iter().collect();
            monos
                .sort_by(|(m1, _), (m2, _)| m2.degree().cmp(&m1.degree()).then_with(|| m1.cmp(m2)));
            for (m, c) in monos {
                let negative = c.is_negative();
                if first {
                    if negative {
                        f.write_str("-")?;
                    }
                } else {
                    f.write_str(if negative { " - " } else { " + " })?;
                }
                first = false;
                write_term(f, &c.abs(), m, a)?;
            }
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, c: &Rational, m: &Monomial, a: &EPoly) -> fmt::Result {
    let mut factors = Vec::new();
    if !c.is_one() {
        factors.push(c.to_string());
    }
    for (v, e) in m.iter() {
        if e == 1 {
            factors.push(v.to_string());
        } else {
            factors.push(format!("{v}^{e}"));
        }
    }
    if !a.is_zero() {
        factors.push(format!("E({a})"));
    }
    if factors.is_empty() {
        factors.push("1".into());
    }
    f.write_str(&factors.join("*"))
}

impl fmt::Debug for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EPoly({self})")
    }
}
