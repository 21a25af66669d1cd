use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::backend::Backend;
use crate::epoly::VarId;
use crate::error::{Error, Result};

/// Numeric values bound to variables, all in one backend field.
pub type Point<S> = BTreeMap<VarId, S>;

/// Values of `δ^j(x)` for `j ≤ order`, keyed by the variable `(x, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S> {
    order: u32,
    values: Point<S>,
}

impl<S: Clone> Jet<S> {
    pub fn new(order: u32) -> Self {
        Jet {
            order,
            values: Point::new(),
        }
    }

    /// Wraps a point; the order is the largest derivative order present.
    pub fn from_point(values: Point<S>) -> Self {
        let order = values.keys().map(VarId::order).max().unwrap_or(0);
        Jet { order, values }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn values(&self) -> &Point<S> {
        &self.values
    }

    pub fn into_point(self) -> Point<S> {
        self.values
    }

    pub fn get(&self, v: &VarId) -> Option<&S> {
        self.values.get(v)
    }

    pub fn insert(&mut self, v: VarId, value: S) {
        self.order = self.order.max(v.order());
        self.values.insert(v, value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Base names present in the jet.
    pub fn bases(&self) -> Vec<String> {
        let mut out: Vec<String> = self.values.keys().map(|v| v.base().to_string()).collect();
        out.dedup();
        out
    }

    /// Whether every base present is bound at all orders `0..=order`.
    pub fn is_total(&self) -> bool {
        self.bases()
            .iter()
            .all(|b| (0..=self.order).all(|j| self.values.contains_key(&VarId::with_order(b, j))))
    }

    /// Serializes as an optional backend header followed by
    /// `base:order=value` lines in canonical variable order.
    pub fn to_text<B: Backend<Scalar = S>>(&self, backend: &B) -> String {
        let mut s = String::new();
        if let Some(h) = backend.header() {
            let _ = writeln!(s, "{h}");
        }
        for (v, x) in &self.values {
            let _ = writeln!(s, "{}:{}={}", v.base(), v.order(), backend.format(x));
        }
        s
    }

    pub fn from_text<B: Backend<Scalar = S>>(text: &str, backend: &B) -> Result<Self> {
        let mut jet = Jet::new(0);
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .peekable();
        if let Some(expected) = backend.header() {
            if lines.peek().is_some_and(|l| l.starts_with("p=")) {
                let got = lines.next().unwrap_or_default();
                if got.split_whitespace().ne(expected.split_whitespace()) {
                    return Err(Error::Format(format!(
                        "jet header `{got}` does not match backend `{expected}`"
                    )));
                }
            }
        }
        for line in lines {
            let (v, x) = parse_entry(line)?;
            if jet.values.contains_key(&v) {
                return Err(Error::Format(format!("duplicate jet entry for {v}")));
            }
            jet.insert(v, backend.parse(x)?);
        }
        Ok(jet)
    }
}

fn parse_entry(line: &str) -> Result<(VarId, &str)> {
    let bad = || Error::Format(format!("expected `var:order=value`, got `{line}`"));
    let (key, value) = line.split_once('=').ok_or_else(bad)?;
    let (base, order) = key.trim().split_once(':').ok_or_else(bad)?;
    let order: u32 = order.trim().parse().map_err(|_| bad())?;
    let base = VarId::parse(base.trim()).map_err(|_| bad())?;
    if base.order() != 0 {
        return Err(bad());
    }
    Ok((VarId::with_order(base.base(), order), value.trim()))
}

/// Parses `name=value` pairs (as in `x=0.5,c__1=2`) into a point.
pub fn parse_point<B: Backend>(src: &str, backend: &B) -> Result<Point<B::Scalar>> {
    let mut pt = Point::new();
    for part in src
        .split([',', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("expected name=value, got `{part}`")))?;
        let var = match k.split_once(':') {
            Some((b, j)) => {
                let j: u32 = j
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("bad order in `{k}`")))?;
                VarId::with_order(VarId::parse(b.trim())?.base(), j)
            }
            None => VarId::parse(k.trim())?,
        };
        pt.insert(var, backend.parse(v)?);
    }
    Ok(pt)
}
