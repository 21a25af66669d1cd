use super::backend::Backend;
use super::jet::Point;
use crate::differential::ERational;
use crate::epoly::{EPoly, Poly};
use crate::error::{Error, Result};

/// Evaluates `p` at `pt`, interpreting `E` as the backend's exponential.
pub fn eval<B: Backend>(p: &EPoly, pt: &Point<B::Scalar>, backend: &B) -> Result<B::Scalar> {
    let mut acc = backend.zero();
    for (a, c) in p.terms() {
        let mut term = eval_poly(c, pt, backend)?;
        if !a.is_zero() {
            let arg = eval(a, pt, backend)?;
            term = backend.mul(&term, &backend.exp(&arg)?);
        }
        acc = backend.check(backend.add(&acc, &term))?;
    }
    Ok(acc)
}

/// Evaluates a plain polynomial.
pub fn eval_poly<B: Backend>(p: &Poly, pt: &Point<B::Scalar>, backend: &B) -> Result<B::Scalar> {
    let mut acc = backend.zero();
    for (m, c) in p.iter() {
        let mut term = backend.from_rational(c)?;
        for (v, e) in m.iter() {
            let x = pt
                .get(v)
                .ok_or_else(|| Error::Shape(format!("point does not bind {v}")))?;
            for _ in 0..e {
                term = backend.mul(&term, x);
            }
        }
        acc = backend.check(backend.add(&acc, &term))?;
    }
    Ok(acc)
}

/// Evaluates `num / den`; a vanishing denominator is a domain error.
pub fn eval_rational<B: Backend>(
    q: &ERational,
    pt: &Point<B::Scalar>,
    backend: &B,
) -> Result<B::Scalar> {
    let n = eval(&q.num, pt, backend)?;
    let d = eval(&q.den, pt, backend)?;
    backend.check(backend.mul(&n, &backend.inv(&d)?))
}

/// Evaluates every polynomial of a list.
pub fn eval_all<B: Backend>(
    ps: &[EPoly],
    pt: &Point<B::Scalar>,
    backend: &B,
) -> Result<Vec<B::Scalar>> {
    ps.iter().map(|p| eval(p, pt, backend)).collect()
}

/// Evaluates a matrix of E-polynomials.
pub fn eval_matrix<B: Backend>(
    m: &[Vec<EPoly>],
    pt: &Point<B::Scalar>,
    backend: &B,
) -> Result<Vec<Vec<B::Scalar>>> {
    m.iter().map(|row| eval_all(row, pt, backend)).collect()
}
