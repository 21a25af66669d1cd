//! Stage decomposition and the complexity measures `rk` and `ord`.

use std::collections::BTreeSet;

use super::{EPoly, OrdinalCNF};
use crate::error::{Error, Result};

/// Height of the term carrying exponent `a`: 0 for the polynomial part,
/// otherwise `height(a) + 1`.
fn term_layer(a: &EPoly) -> usize {
    if a.is_zero() {
        0
    } else {
        a.height() as usize + 1
    }
}

/// Splits `p` into `(p_0, …, p_k)` with `p_i ∈ A_i` (and the constant in
/// `p_0`), `k = height(p)`.
pub fn layer_decompose(p: &EPoly) -> Vec<EPoly> {
    let mut out = vec![EPoly::zero(); p.height() as usize + 1];
    for (a, c) in p.terms() {
        let i = term_layer(a);
        out[i] = &out[i] + &EPoly::monomial_term(c.clone(), a.clone());
    }
    out
}

/// The part of a nonzero exponent lying in its top layer `A_{height(a)}`.
fn top_part(a: &EPoly) -> EPoly {
    let h = a.height() as usize;
    a.terms()
        .filter(|(k, _)| term_layer(k) == h)
        .map(|(k, c)| EPoly::monomial_term(c.clone(), k.clone()))
        .sum()
}

/// `rk(p_i)` for the `i`-th layer component.
///
/// Layer 0 measures `totdeg + 1`; higher layers count the distinct top-layer
/// parts of the exponents, lower-layer parts being absorbed into the
/// coefficient through `E(a) = E(a_low)·E(a_top)`.
pub fn rank_component(p_i: &EPoly, i: usize) -> Result<u64> {
    if let Some((a, _)) = p_i.terms().find(|(a, _)| term_layer(a) != i) {
        return Err(Error::Shape(format!(
            "term with exponent {a} belongs to layer {}, not {i}",
            term_layer(a)
        )));
    }
    if p_i.is_zero() {
        return Ok(0);
    }
    if i == 0 {
        return Ok(p_i.poly_part().total_degree() as u64 + 1);
    }
    let classes: BTreeSet<EPoly> = p_i.terms().map(|(a, _)| top_part(a)).collect();
    Ok(classes.len() as u64)
}

/// `ord(p) = Σ ω^i · rk(p_i)`.
pub fn ord(p: &EPoly) -> OrdinalCNF {
    let coeffs = layer_decompose(p)
        .iter()
        .enumerate()
        .map(|(i, c)| rank_component(c, i).expect("components come from layer_decompose"))
        .collect();
    OrdinalCNF::from_coeffs(coeffs)
}

/// For `p` with zero polynomial part, returns `(q, E(q)·p)` where `-q` is the
/// canonically smallest exponent of the lowest nonzero layer; the second
/// component has strictly smaller `ord`.
pub fn ord_reduce(p: &EPoly) -> Result<(EPoly, EPoly)> {
    if p.is_zero() {
        return Err(Error::Precondition("ord_reduce of 0".into()));
    }
    if !p.poly_part().is_zero() {
        return Err(Error::Precondition(
            "ord_reduce needs a zero polynomial part".into(),
        ));
    }
    let a1 = p
        .terms()
        .map(|(a, _)| a)
        .min_by(|a, b| term_layer(a).cmp(&term_layer(b)).then_with(|| a.cmp(b)))
        .expect("p is nonzero");
    let q = -a1;
    let reduced = p.shift(&q);
    Ok((q, reduced))
}
