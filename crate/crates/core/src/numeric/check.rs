use super::backend::Backend;
use super::eval::{eval, eval_all, eval_matrix};
use super::jet::Point;
use super::tolerance::ToleranceSpec;
use crate::differential::{check_slice, jacobian, KhovanskiiSystem};
use crate::epoly::{EPoly, VarId};
use crate::error::{Error, Result};

/// Outcome of checking a point against a Khovanskii system.
#[derive(Clone, Debug, PartialEq)]
pub struct KhovanskiiReport<S> {
    pub residuals: Vec<S>,
    pub det: S,
    pub residual_ok: bool,
    pub regular: bool,
    pub verdict: bool,
    /// `#variables − #equations` for the ambient variety.
    pub dimension_bound: usize,
}

pub fn khovanskii_check<B: Backend>(
    h: &KhovanskiiSystem,
    pt: &Point<B::Scalar>,
    backend: &B,
    tol: &ToleranceSpec,
) -> Result<KhovanskiiReport<B::Scalar>> {
    let residuals = eval_all(h.polys(), pt, backend)?;
    let det = eval(h.jac_det(), pt, backend)?;
    let residual_ok = residuals.iter().all(|r| backend.residual_ok(r, tol));
    let regular = backend.regular(&det, tol);
    Ok(KhovanskiiReport {
        residuals,
        det,
        residual_ok,
        regular,
        verdict: residual_ok && regular,
        dimension_bound: h.dimension_bound(),
    })
}

/// Whether the Jacobian of `gs` restricted to the columns `slice` (0-based
/// into `vars`) has full row rank at `pt`.
pub fn regular_point_check<B: Backend>(
    gs: &[EPoly],
    vars: &[VarId],
    slice: &[usize],
    pt: &Point<B::Scalar>,
    backend: &B,
    tol: &ToleranceSpec,
) -> Result<bool> {
    check_slice(vars.len(), slice)?;
    if slice.len() < gs.len() {
        return Err(Error::Shape(format!(
            "slice of {} columns for {} polynomials",
            slice.len(),
            gs.len()
        )));
    }
    let cols: Vec<VarId> = slice.iter().map(|&i| vars[i].clone()).collect();
    let rows = eval_matrix(&jacobian(gs, &cols), pt, backend)?;
    Ok(backend.full_row_rank(&rows, tol))
}

/// Componentwise closeness of two points (or jet tables) on the same keys.
pub fn neighborhood_check<B: Backend>(
    a: &Point<B::Scalar>,
    b: &Point<B::Scalar>,
    backend: &B,
    tol: &ToleranceSpec,
) -> Result<bool> {
    if !a.keys().eq(b.keys()) {
        return Err(Error::Shape(
            "neighborhood check on differently shaped values".into(),
        ));
    }
    Ok(a.values()
        .zip(b.values())
        .all(|(x, y)| backend.close(x, y, tol)))
}
