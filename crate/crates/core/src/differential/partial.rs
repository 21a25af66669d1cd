use std::collections::BTreeSet;

use crate::epoly::{EPoly, VarId};
use crate::error::{Error, Result};

/// `∂_v p`: the E-derivation with `∂_v v' = [v = v']`, trivial on ℚ.
pub fn partial_derivative(p: &EPoly, v: &VarId) -> EPoly {
    let mut out = EPoly::zero();
    for (a, c) in p.terms() {
        let dc = EPoly::from_poly(c.partial(v));
        let term = if a.is_zero() {
            dc
        } else {
            let da = partial_derivative(a, v);
            (&dc + &(&EPoly::from_poly(c.clone()) * &da)).shift(a)
        };
        out = &out + &term;
    }
    out
}

/// Total δ-lift `Σ_v ∂_v p · succ(v)` over every variable of `p`.
pub fn delta_shift(p: &EPoly) -> EPoly {
    shift_over(p, |_| true)
}

/// `p^δ`: the part of [`delta_shift`] coming from variables outside `unknowns`.
pub fn parameter_delta(p: &EPoly, unknowns: &[VarId]) -> EPoly {
    shift_over(p, |v| !unknowns.contains(v))
}

fn shift_over(p: &EPoly, include: impl Fn(&VarId) -> bool) -> EPoly {
    p.variables()
        .into_iter()
        .filter(|v| include(v))
        .map(|v| &partial_derivative(p, &v) * &EPoly::var(v.succ()))
        .sum()
}

/// `(∂_{vars[i]} f)` for the 0-based, strictly increasing `indices`.
pub fn gradient_slice(f: &EPoly, vars: &[VarId], indices: &[usize]) -> Result<Vec<EPoly>> {
    check_slice(vars.len(), indices)?;
    Ok(indices
        .iter()
        .map(|&i| partial_derivative(f, &vars[i]))
        .collect())
}

pub(crate) fn check_slice(n: usize, indices: &[usize]) -> Result<()> {
    if let Some(&i) = indices.iter().find(|&&i| i >= n) {
        return Err(Error::Index(format!(
            "index {i} out of range for {n} variables"
        )));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Index(
            "slice indices must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Union of the variables of several E-polynomials.
pub fn variables_of(ps: &[EPoly]) -> BTreeSet<VarId> {
    ps.iter().flat_map(EPoly::variables).collect()
}
