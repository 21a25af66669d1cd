use super::backend::Backend;
use super::eval::{eval, eval_all, eval_matrix};
use super::jet::{Jet, Point};
use super::linalg::solve_square;
use super::tolerance::ToleranceSpec;
use crate::differential::{delta_shift, KhovanskiiSystem};
use crate::epoly::EPoly;
use crate::error::{Error, Result};

/// Jet of the unknowns of `h` up to order `levels` at a solution `pt`.
///
/// Level `k` differentiates the system `k` times with [`delta_shift`]; the
/// result is affine in the order-`k` successors of the unknowns with
/// coefficient matrix `J`, so each level is one linear solve. Parameter
/// successors are read from `parameter_jet`.
pub fn propagate_numeric<B: Backend>(
    h: &KhovanskiiSystem,
    pt: &Point<B::Scalar>,
    parameter_jet: &Jet<B::Scalar>,
    levels: u32,
    backend: &B,
    tol: &ToleranceSpec,
) -> Result<Jet<B::Scalar>> {
    let mut binding = pt.clone();
    for (k, v) in parameter_jet.values() {
        binding.entry(k.clone()).or_insert_with(|| v.clone());
    }
    let det = eval(h.jac_det(), &binding, backend)?;
    if !backend.regular(&det, tol) {
        return Err(Error::SingularJacobian(format!(
            "det J = {} is not regular",
            backend.format(&det)
        )));
    }
    let j = eval_matrix(&h.jacobian(), &binding, backend)?;

    let mut out = Jet::new(0);
    for u in h.unknowns() {
        let x = binding
            .get(u)
            .ok_or_else(|| Error::Shape(format!("point does not bind unknown {u}")))?;
        out.insert(u.clone(), x.clone());
    }
    let mut derived: Vec<EPoly> = h.polys().to_vec();
    for k in 1..=levels {
        derived = derived.iter().map(delta_shift).collect();
        for u in h.unknowns() {
            binding.insert(u.shifted(k), backend.zero());
        }
        let rhs: Vec<B::Scalar> = eval_all(&derived, &binding, backend)?
            .iter()
            .map(|r| backend.neg(r))
            .collect();
        let d = solve_square(backend, &j, &rhs)?;
        for (u, x) in h.unknowns().iter().zip(d) {
            binding.insert(u.shifted(k), x.clone());
            out.insert(u.shifted(k), x);
        }
    }
    Ok(out)
}
