use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A differential indeterminate `δ^order(base)`.
///
/// Order-0 variables print as their base name; higher orders print as
/// `base__order` (for example `x__2` for `δ²x`), which is also how the term
/// parser reads them back.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    base: Arc<str>,
    order: u32,
}

const RESERVED: [&str; 3] = ["E", "D", "inv"];

impl VarId {
    pub fn new(base: &str) -> Self {
        Self::with_order(base, 0)
    }

    pub fn with_order(base: &str, order: u32) -> Self {
        VarId {
            base: Arc::from(base),
            order,
        }
    }

    /// Parses a printed name, splitting a trailing `__<digits>` order suffix.
    pub fn parse(name: &str) -> Result<Self> {
        let valid_ident = |s: &str| {
            let mut chars = s.chars();
            matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        if !valid_ident(name) {
            return Err(Error::Format(format!("invalid variable name `{name}`")));
        }
        let (base, order) = match name.rfind("__") {
            Some(i)
                if i > 0
                    && name.len() > i + 2
                    && name[i + 2..].chars().all(|c| c.is_ascii_digit()) =>
            {
                let order: u32 = name[i + 2..]
                    .parse()
                    .map_err(|_| Error::Format(format!("order suffix too large in `{name}`")))?;
                (&name[..i], order)
            }
            _ => (name, 0),
        };
        if RESERVED.contains(&base) {
            return Err(Error::Format(format!("`{base}` is a reserved word")));
        }
        Ok(VarId::with_order(base, order))
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `δ` applied once: `(x, j) ↦ (x, j + 1)`.
    pub fn succ(&self) -> VarId {
        self.shifted(1)
    }

    pub fn shifted(&self, k: u32) -> VarId {
        VarId {
            base: self.base.clone(),
            order: self.order + k,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 0 {
            f.write_str(&self.base)
        } else {
            write!(f, "{}__{}", self.base, self.order)
        }
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
