use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{One, Zero};

use super::{Monomial, Poly, Rational, VarId};
use crate::error::{Error, Result};

/// An element of the free partial E-ring ℚ[X]^E in canonical form.
///
/// The representation is the iterated group ring: a finite map from exponents
/// `a` (themselves `EPoly`s with zero constant term) to nonzero polynomial
/// coefficients, read as `Σ P_a · E(a)`. The key `0` carries the ordinary
/// polynomial part. Two values are equal exactly when their maps are equal.
///
/// Values are immutable and share structure, so cloning is cheap.
#[derive(Clone)]
pub struct EPoly {
    terms: Arc<BTreeMap<EPoly, Poly>>,
    height: u32,
}

impl EPoly {
    pub fn zero() -> Self {
        EPoly {
            terms: Arc::new(BTreeMap::new()),
            height: 0,
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn var(v: VarId) -> Self {
        Self::from_poly(Poly::var(v))
    }

    /// Shorthand for an order-0 variable.
    pub fn named(base: &str) -> Self {
        Self::var(VarId::new(base))
    }

    pub fn from_poly(p: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(EPoly::zero(), p);
        }
        Self::from_map(terms)
    }

    /// A single term `P · E(a)`; `a` must have zero constant term.
    pub(crate) fn monomial_term(p: Poly, a: EPoly) -> Self {
        debug_assert!(a.scalar_const().is_zero());
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(a, p);
        }
        Self::from_map(terms)
    }

    fn from_map(terms: BTreeMap<EPoly, Poly>) -> Self {
        let height = terms.keys().map(key_height).max().unwrap_or(0);
        EPoly {
            terms: Arc::new(terms),
            height,
        }
    }

    /// `E(self)`. Defined only when the rational constant of `self` is 0.
    pub fn exp(&self) -> Result<EPoly> {
        let c = self.scalar_const();
        if !c.is_zero() {
            return Err(Error::Domain(format!(
                "E is undefined on an argument with nonzero constant {c}"
            )));
        }
        Ok(Self::monomial_term(Poly::one(), self.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coefficient(&EPoly::zero()).is_some_and(Poly::is_one)
    }

    /// Nesting depth of `E`; 0 for ordinary polynomials (and for 0).
    pub fn height(&self) -> u32 {
        self.height
    }

    /// Number of exponent keys.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` pairs in canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&EPoly, &Poly)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &EPoly) -> Option<&Poly> {
        self.terms.get(exponent)
    }

    /// The ordinary polynomial part (coefficient of `E(0)`).
    pub fn poly_part(&self) -> Poly {
        self.coefficient(&EPoly::zero())
            .cloned()
            .unwrap_or_default()
    }

    /// The coefficient of the monomial 1 at exponent 0.
    pub fn scalar_const(&self) -> Rational {
        self.coefficient(&EPoly::zero())
            .map(Poly::constant_term)
            .unwrap_or_else(Rational::zero)
    }

    /// Returns the rational value if `self` is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let p = self.coefficient(&EPoly::zero())?;
                (p.len() == 1 && p.total_degree() == 0).then(|| p.constant_term())
            }
            _ => None,
        }
    }

    /// All variables occurring anywhere, including inside exponents.
    pub fn variables(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<VarId>) {
        for (a, p) in self.terms.iter() {
            out.extend(p.variables());
            a.collect_variables(out);
        }
    }

    /// Multiplies by `E(a)` without re-validating `a`; every key shifts by `a`.
    pub(crate) fn shift(&self, a: &EPoly) -> EPoly {
        if a.is_zero() {
            return self.clone();
        }
        Self::from_map(self.terms.iter().map(|(k, p)| (k + a, p.clone())).collect())
    }

    pub fn scale(&self, s: &Rational) -> EPoly {
        if s.is_zero() {
            return EPoly::zero();
        }
        Self::from_map(
            self.terms
                .iter()
                .map(|(k, p)| (k.clone(), p.scale(s)))
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> EPoly {
        let mut result = EPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Homomorphic image under `v ↦ bindings[v]`; unbound variables stay.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, EPoly>) -> Result<EPoly> {
        let mut out = EPoly::zero();
        for (a, p) in self.terms.iter() {
            let coeff = substitute_poly(p, bindings);
            if coeff.is_zero() {
                continue;
            }
            let term = if a.is_zero() {
                coeff
            } else {
                &coeff * &a.substitute(bindings)?.exp()?
            };
            out = &out + &term;
        }
        Ok(out)
    }

    fn add_impl(&self, other: &EPoly) -> EPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut terms = (*self.terms).clone();
        for (k, p) in other.terms.iter() {
            add_into(&mut terms, k.clone(), p.clone());
        }
        Self::from_map(terms)
    }

    fn mul_impl(&self, other: &EPoly) -> EPoly {
        let mut terms = BTreeMap::new();
        for (a, p) in self.terms.iter() {
            for (b, q) in other.terms.iter() {
                add_into(&mut terms, a + b, p.mul(q));
            }
        }
        Self::from_map(terms)
    }

    fn neg_impl(&self) -> EPoly {
        Self::from_map(
            self.terms
                .iter()
                .map(|(k, p)| (k.clone(), p.neg()))
                .collect(),
        )
    }
}

fn key_height(a: &EPoly) -> u32 {
    if a.is_zero() {
        0
    } else {
        a.height + 1
    }
}

fn add_into(terms: &mut BTreeMap<EPoly, Poly>, k: EPoly, p: Poly) {
    if p.is_zero() {
        return;
    }
    match terms.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(p);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get().add(&p);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

fn substitute_poly(p: &Poly, bindings: &BTreeMap<VarId, EPoly>) -> EPoly {
    let mut out = EPoly::zero();
    for (m, c) in p.iter() {
        let mut term = EPoly::constant(c.clone());
        let mut rest = Monomial::one();
        for (v, e) in m.iter() {
            match bindings.get(v) {
                Some(val) => term = &term * &val.pow(e),
                None => rest = rest.mul(&Monomial::power(v.clone(), e)),
            }
        }
        if !rest.is_one() {
            term = &term * &EPoly::from_poly(Poly::term(Rational::one(), rest));
        }
        out = &out + &term;
    }
    out
}

/// The canonical total order: height, then number of exponent keys, then
/// lexicographically over `(exponent, coefficient)` pairs in key order.
pub fn compare_canonical(p: &EPoly, q: &EPoly) -> Ordering {
    p.height
        .cmp(&q.height)
        .then_with(|| p.terms.len().cmp(&q.terms.len()))
        .then_with(|| {
            for ((ka, pa), (kb, pb)) in p.terms.iter().zip(q.terms.iter()) {
                let o = compare_canonical(ka, kb).then_with(|| pa.cmp(pb));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
}

impl PartialEq for EPoly {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.terms, &other.terms)
            || (self.height == other.height && self.terms == other.terms)
    }
}

impl Eq for EPoly {}

impl PartialOrd for EPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_canonical(self, other)
    }
}

impl Hash for EPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.len().hash(state);
        for (k, p) in self.terms.iter() {
            k.hash(state);
            p.hash(state);
        }
    }
}

impl Default for EPoly {
    fn default() -> Self {
        EPoly::zero()
    }
}

impl From<Poly> for EPoly {
    fn from(p: Poly) -> Self {
        EPoly::from_poly(p)
    }
}

impl From<i64> for EPoly {
    fn from(n: i64) -> Self {
        EPoly::integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&EPoly> for &EPoly {
            type Output = EPoly;
            fn $method(self, rhs: &EPoly) -> EPoly {
                self.$imp(rhs)
            }
        }
        impl $trait<EPoly> for EPoly {
            type Output = EPoly;
            fn $method(self, rhs: EPoly) -> EPoly {
                (&self).$imp(&rhs)
            }
        }
        impl $trait<&EPoly> for EPoly {
            type Output = EPoly;
            fn $method(self, rhs: &EPoly) -> EPoly {
                (&self).$imp(rhs)
            }
        }
        impl $trait<EPoly> for &EPoly {
            type Output = EPoly;
            fn $method(self, rhs: EPoly) -> EPoly {
                self.$imp(&rhs)
            }
        }
    };
}

impl EPoly {
    fn sub_impl(&self, other: &EPoly) -> EPoly {
        self.add_impl(&other.neg_impl())
    }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for &EPoly {
    type Output = EPoly;
    fn neg(self) -> EPoly {
        self.neg_impl()
    }
}

impl Neg for EPoly {
    type Output = EPoly;
    fn neg(self) -> EPoly {
        self.neg_impl()
    }
}

impl std::iter::Sum for EPoly {
    fn sum<I: Iterator<Item = EPoly>>(iter: I) -> Self {
        iter.fold(EPoly::zero(), |acc, p| &acc + &p)
    }
}

impl std::iter::Product for EPoly {
    fn product<I: Iterator<Item = EPoly>>(iter: I) -> Self {
        iter.fold(EPoly::one(), |acc, p| &acc * &p)
    }
}
