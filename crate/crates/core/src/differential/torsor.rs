use super::jacobian::jacobian;
use super::partial::parameter_delta;
use crate::epoly::{EPoly, VarId};
use crate::error::{Error, Result};
use crate::numeric::linalg::solve_square;
use crate::numeric::{eval, eval_all, eval_matrix, Backend, Jet, Point, ToleranceSpec};

/// Residuals of the torsor condition at `a` in direction `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsorReport<S> {
    /// `Σ_i ∂_{X_i} f(a)·b_i + f^δ(a)` per generator.
    pub residuals: Vec<S>,
    /// `f(a)` per generator.
    pub values: Vec<S>,
    pub member: bool,
}

fn binding<S: Clone>(a: &Point<S>, parameter_jet: &Jet<S>) -> Point<S> {
    let mut pt = a.clone();
    for (k, v) in parameter_jet.values() {
        pt.entry(k.clone()).or_insert_with(|| v.clone());
    }
    pt
}

/// Evaluates the torsor condition of `generators` in the `unknowns`.
///
/// The unknown values come from `a` and their tangents from `b` (both keyed
/// by the unknowns); parameters and their successors come from `a` or
/// `parameter_jet`. Membership is relative to the finite generator list.
#[allow(clippy::too_many_arguments)]
pub fn torsor_residual<B: Backend>(
    generators: &[EPoly],
    unknowns: &[VarId],
    a: &Point<B::Scalar>,
    b: &Point<B::Scalar>,
    parameter_jet: &Jet<B::Scalar>,
    backend: &B,
    tol: &ToleranceSpec,
) -> Result<TorsorReport<B::Scalar>> {
    let pt = binding(a, parameter_jet);
    let tangent = unknowns
        .iter()
        .map(|u| {
            b.get(u)
                .cloned()
                .ok_or_else(|| Error::Shape(format!("tangent does not bind {u}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let jac = eval_matrix(&jacobian(generators, unknowns), &pt, backend)?;
    let mut residuals = Vec::with_capacity(generators.len());
    for (f, row) in generators.iter().zip(&jac) {
        let mut r = eval(&parameter_delta(f, unknowns), &pt, backend)?;
        for (d, t) in row.iter().zip(&tangent) {
            r = backend.add(&r, &backend.mul(d, t));
        }
        residuals.push(r);
    }
    let values = eval_all(generators, &pt, backend)?;
    let member = residuals
        .iter()
        .chain(&values)
        .all(|r| backend.residual_ok(r, tol));
    Ok(TorsorReport {
        residuals,
        values,
        member,
    })
}

/// Tangents of the `dependent` unknowns making the torsor residual vanish,
/// given tangents of the `free` unknowns.
///
/// Solves `J_dep·b_dep = −(f^δ(a) + Σ_free ∂_j f(a)·b_j)`, where `J_dep` is
/// the square Jacobian block in the dependent unknowns.
#[allow(clippy::too_many_arguments)]
pub fn solve_dependent_jet<B: Backend>(
    generators: &[EPoly],
    free: &[VarId],
    dependent: &[VarId],
    a: &Point<B::Scalar>,
    free_tangents: &Point<B::Scalar>,
    parameter_jet: &Jet<B::Scalar>,
    backend: &B,
    tol: &ToleranceSpec,
) -> Result<Point<B::Scalar>> {
    if generators.len() != dependent.len() {
        return Err(Error::Shape(format!(
            "{} generators for {} dependent unknowns",
            generators.len(),
            dependent.len()
        )));
    }
    let unknowns: Vec<VarId> = free.iter().chain(dependent).cloned().collect();
    let pt = binding(a, parameter_jet);
    let j_dep = eval_matrix(&jacobian(generators, dependent), &pt, backend)?;
    let j_free = eval_matrix(&jacobian(generators, free), &pt, backend)?;
    let bf = free
        .iter()
        .map(|u| {
            free_tangents
                .get(u)
                .cloned()
                .ok_or_else(|| Error::Shape(format!("no tangent for free unknown {u}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rhs = Vec::with_capacity(generators.len());
    for (f, row) in generators.iter().zip(&j_free) {
        let mut r = eval(&parameter_delta(f, &unknowns), &pt, backend)?;
        for (d, t) in row.iter().zip(&bf) {
            r = backend.add(&r, &backend.mul(d, t));
        }
        rhs.push(backend.neg(&r));
    }
    let det = crate::numeric::linalg::determinant(backend, &j_dep)?;
    if !backend.regular(&det, tol) {
        return Err(Error::SingularJacobian(format!(
            "dependent block has det {}",
            backend.format(&det)
        )));
    }
    let bd = solve_square(backend, &j_dep, &rhs)?;
    Ok(dependent.iter().cloned().zip(bd).collect())
}
