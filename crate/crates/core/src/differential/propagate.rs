use super::jacobian::adjugate;
use super::khovanskii::KhovanskiiSystem;
use super::partial::{parameter_delta, partial_derivative};
use super::ERational;
use crate::epoly::{EPoly, Rational};
use crate::error::{Error, Result};

/// Iterated derivatives of the unknowns of `h` as E-rational functions.
///
/// Entry `[k - 1][i]` is `δ^k(u_i)` expressed in the unknowns, the
/// parameters and the parameter successors up to order `k`. Level 1 is
/// `-adj(J)·f^δ / det J`; each further level differentiates the previous one
/// and substitutes level 1 for `δ(u_i)`. The denominator at level `k` is
/// exactly `det J^(2k-1)`.
pub fn propagate_symbolic(h: &KhovanskiiSystem, levels: usize) -> Result<Vec<Vec<ERational>>> {
    if levels == 0 {
        return Err(Error::Precondition(
            "propagation needs at least one level".into(),
        ));
    }
    let unknowns = h.unknowns();
    let det = h.jac_det();
    let adj = adjugate(&h.jacobian());
    let f_delta: Vec<EPoly> = h
        .polys()
        .iter()
        .map(|f| parameter_delta(f, unknowns))
        .collect();
    let first: Vec<EPoly> = adj
        .iter()
        .map(|row| -row.iter().zip(&f_delta).map(|(a, b)| a * b).sum::<EPoly>())
        .collect();

    // δ(p) · det for a polynomial p in unknowns and parameters.
    let delta_times_det = |p: &EPoly| -> EPoly {
        let via_unknowns: EPoly = unknowns
            .iter()
            .zip(&first)
            .map(|(u, t)| &partial_derivative(p, u) * t)
            .sum();
        &via_unknowns + &(det * &parameter_delta(p, unknowns))
    };
    let det_delta = delta_times_det(det);

    let mut out = Vec::with_capacity(levels);
    let mut nums = first.clone();
    let mut exponent: u32 = 1;
    out.push(wrap(&nums, det, exponent));
    for _ in 1..levels {
        // δ(N / det^e) = (δN·det − e·N·δdet) / det^(e+1) with δN, δdet carrying a
        // further 1/det, giving denominator det^(e+2).
        let e = Rational::from_integer(exponent.into());
        nums = nums
            .iter()
            .map(|n| &(&delta_times_det(n) * det) - &(n * &det_delta).scale(&e))
            .collect();
        exponent += 2;
        out.push(wrap(&nums, det, exponent));
    }
    Ok(out)
}

fn wrap(nums: &[EPoly], det: &EPoly, exponent: u32) -> Vec<ERational> {
    let den = det.pow(exponent);
    nums.iter()
        .map(|n| ERational {
            num: n.clone(),
            den: den.clone(),
        })
        .collect()
}
