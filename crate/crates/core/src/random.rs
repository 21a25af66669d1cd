//! Seeded random E-polynomials and terms for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::epoly::{EPoly, Monomial, Poly, Rational, VarId};
use crate::term::Term;

/// Bounds for [`random_epoly`].
#[derive(Clone, Debug)]
pub struct EPolyShape {
    pub vars: Vec<VarId>,
    pub max_height: u32,
    /// Total degree bound of every polynomial coefficient.
    pub max_degree: u32,
    /// Number of `coefficient·E(exponent)` terms per level.
    pub max_terms: usize,
    /// Integer coefficients are drawn from `-max_coeff..=max_coeff`.
    pub max_coeff: i64,
}

impl Default for EPolyShape {
    fn default() -> Self {
        EPolyShape {
            vars: ["x", "y", "z", "w"].iter().map(|v| VarId::new(v)).collect(),
            max_height: 2,
            max_degree: 3,
            max_terms: 3,
            max_coeff: 3,
        }
    }
}

/// A random polynomial with total degree at most `degree`.
pub fn random_poly<R: Rng>(rng: &mut R, shape: &EPolyShape, degree: u32) -> Poly {
    let n_terms = rng.gen_range(1..=shape.max_terms.max(1));
    let mut p = Poly::zero();
    for _ in 0..n_terms {
        let d = rng.gen_range(0..=degree);
        let mut m = Monomial::one();
        for _ in 0..d {
            if let Some(v) = shape.vars.choose(rng) {
                m = m.mul(&Monomial::var(v.clone()));
            }
        }
        let c = rng.gen_range(-shape.max_coeff..=shape.max_coeff);
        p = p.add(&Poly::term(Rational::from_integer(c.into()), m));
    }
    p
}

/// A random exponent: height at most `height`, zero scalar constant.
fn random_exponent<R: Rng>(rng: &mut R, shape: &EPolyShape, height: u32) -> EPoly {
    let a = random_epoly_at(rng, shape, height);
    &a - &EPoly::constant(a.scalar_const())
}

fn random_epoly_at<R: Rng>(rng: &mut R, shape: &EPolyShape, height: u32) -> EPoly {
    let mut p = EPoly::from_poly(random_poly(rng, shape, shape.max_degree));
    if height == 0 {
        return p;
    }
    let n_terms = rng.gen_range(0..=shape.max_terms);
    for _ in 0..n_terms {
        let h = rng.gen_range(0..height);
        let a = random_exponent(rng, shape, h);
        let c = EPoly::from_poly(random_poly(rng, shape, shape.max_degree));
        let e = a.exp().expect("exponent has zero constant");
        p = &p + &(&c * &e);
    }
    p
}

/// A random E-polynomial of height at most `shape.max_height`.
pub fn random_epoly<R: Rng>(rng: &mut R, shape: &EPolyShape) -> EPoly {
    random_epoly_at(rng, shape, shape.max_height)
}

/// A random exponent in the symbolic domain of `E` (zero scalar constant).
pub fn random_exp_argument<R: Rng>(rng: &mut R, shape: &EPolyShape) -> EPoly {
    random_exponent(rng, shape, shape.max_height.saturating_sub(1))
}

/// Bounds for [`random_term`].
#[derive(Clone, Debug)]
pub struct TermShape {
    /// Variable names; derivative orders are drawn up to `max_var_order`.
    pub bases: Vec<String>,
    pub max_var_order: u32,
    pub max_depth: u32,
    pub allow_d: bool,
    pub allow_inv: bool,
    /// Generate every `E` argument as `v·t` for a variable `v`, with no
    /// `inv` inside, so that it lies in the symbolic domain of `E`.
    pub exp_guard: bool,
}

impl Default for TermShape {
    fn default() -> Self {
        TermShape {
            bases: vec!["x".into(), "y".into()],
            max_var_order: 1,
            max_depth: 5,
            allow_d: true,
            allow_inv: true,
            exp_guard: false,
        }
    }
}

/// A random term in the shape produced by the parser: literals are
/// nonnegative and subtraction is `a + (-b)`.
pub fn random_term<R: Rng>(rng: &mut R, shape: &TermShape) -> Term {
    term_at(rng, shape, shape.max_depth, false)
}

fn random_var<R: Rng>(rng: &mut R, shape: &TermShape) -> Term {
    let b = shape.bases.choose(rng).map_or("x", String::as_str);
    Term::Var(VarId::with_order(b, rng.gen_range(0..=shape.max_var_order)))
}

/// `no_inv` is set below `D` and, with `exp_guard`, below `E`.
fn term_at<R: Rng>(rng: &mut R, shape: &TermShape, depth: u32, no_inv: bool) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return if rng.gen_bool(0.4) {
            let n: i64 = rng.gen_range(0..=9);
            let d: i64 = if rng.gen_bool(0.3) {
                rng.gen_range(1..=5)
            } else {
                1
            };
            Term::Rat(Rational::new(n.into(), d.into()))
        } else {
            random_var(rng, shape)
        };
    }
    let next = depth - 1;
    let pick = rng.gen_range(0..8);
    match pick {
        0 => Term::add(
            term_at(rng, shape, next, no_inv),
            term_at(rng, shape, next, no_inv),
        ),
        1 => Term::sub(
            term_at(rng, shape, next, no_inv),
            term_at(rng, shape, next, no_inv),
        ),
        2 => Term::mul(
            term_at(rng, shape, next, no_inv),
            term_at(rng, shape, next, no_inv),
        ),
        3 => Term::neg(term_at(rng, shape, next, no_inv)),
        4 => Term::pow(term_at(rng, shape, next, no_inv), rng.gen_range(0..=3)),
        5 if shape.exp_guard => Term::exp(Term::mul(
            random_var(rng, shape),
            term_at(rng, shape, next, true),
        )),
        5 => Term::exp(term_at(rng, shape, next, no_inv)),
        6 if shape.allow_d => Term::d(term_at(rng, shape, next, true)),
        7 if shape.allow_inv && !no_inv => Term::inv(term_at(rng, shape, next, no_inv)),
        _ => Term::mul(
            term_at(rng, shape, next, no_inv),
            term_at(rng, shape, next, no_inv),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_bounds() {
        let shape = EPolyShape::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p = random_epoly(&mut rng, &shape);
            assert!(p.height() <= shape.max_height);
            assert!(p.variables().len() <= 4);
            let a = random_exp_argument(&mut rng, &shape);
            assert!(a.exp().is_ok());
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let shape = EPolyShape::default();
        let a = random_epoly(&mut ChaCha8Rng::seed_from_u64(9), &shape);
        let b = random_epoly(&mut ChaCha8Rng::seed_from_u64(9), &shape);
        assert_eq!(a, b);
        let ts = TermShape::default();
        let s = random_term(&mut ChaCha8Rng::seed_from_u64(9), &ts);
        let t = random_term(&mut ChaCha8Rng::seed_from_u64(9), &ts);
        assert_eq!(s, t);
    }
}
