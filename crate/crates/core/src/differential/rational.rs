use std::fmt;

use crate::epoly::EPoly;
use crate::error::{Error, Result};

/// A formal quotient `num / den` of E-polynomials.
///
/// No common factors are cancelled: denominators built by derivative
/// propagation stay visible as powers of a Jacobian determinant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ERational {
    pub num: EPoly,
    pub den: EPoly,
}

impl ERational {
    pub fn new(num: EPoly, den: EPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(ERational { num, den })
    }

    pub fn from_epoly(p: EPoly) -> Self {
        ERational {
            num: p,
            den: EPoly::one(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
}

impl fmt::Display for ERational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) * inv({})", self.num, self.den)
        }
    }
}
