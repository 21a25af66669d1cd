use super::backend::{Backend, PadicBackend, RealBackend};
use super::eval::{eval_all, eval_matrix};
use super::jet::Point;
use super::linalg::{determinant, solve_square};
use super::padic::Padic;
use super::tolerance::ToleranceSpec;
use crate::differential::jacobian;
use crate::epoly::{EPoly, VarId};
use crate::error::{Error, Result};

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_POLISH: usize = 3;
const HENSEL_MAX_ITER: usize = 64;

fn check_square(fs: &[EPoly], unknowns: &[VarId]) -> Result<()> {
    if fs.len() != unknowns.len() {
        return Err(Error::Shape(format!(
            "{} equations in {} unknowns",
            fs.len(),
            unknowns.len()
        )));
    }
    Ok(())
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Plain Newton iteration on the unknowns of `pt0`; every other variable
/// bound by `pt0` is held fixed as a parameter.
///
/// Iterates until the residual is at most `tol.eps_res`, then takes up to
/// three polishing steps while the residual keeps decreasing.
pub fn newton_solve(
    fs: &[EPoly],
    unknowns: &[VarId],
    pt0: &Point<f64>,
    tol: &ToleranceSpec,
) -> Result<Point<f64>> {
    check_square(fs, unknowns)?;
    let b = RealBackend;
    let jac = jacobian(fs, unknowns);
    let mut pt = pt0.clone();
    for u in unknowns {
        if !pt.contains_key(u) {
            return Err(Error::Shape(format!("seed does not bind unknown {u}")));
        }
    }
    let j0 = eval_matrix(&jac, &pt, &b)?;
    let d0 = determinant(&b, &j0)?;
    if !b.regular(&d0, tol) {
        return Err(Error::SingularJacobian(format!(
            "|det J| = {:e} at the seed",
            d0.abs()
        )));
    }

    let step = |pt: &Point<f64>, r: &[f64]| -> Result<Point<f64>> {
        let j = eval_matrix(&jac, pt, &b)?;
        let neg: Vec<f64> = r.iter().map(|x| -x).collect();
        let dx = solve_square(&b, &j, &neg)?;
        let mut next = pt.clone();
        for (u, d) in unknowns.iter().zip(dx) {
            let x = next.get_mut(u).expect("unknown bound");
            *x += d;
        }
        Ok(next)
    };
    let no_conv = |why: String| Error::NoConvergence(why);

    let mut res = eval_all(fs, &pt, &b).map_err(|e| no_conv(e.to_string()))?;
    let initial = max_abs(&res).max(1.0);
    for it in 0..NEWTON_MAX_ITER {
        let norm = max_abs(&res);
        if norm <= tol.eps_res {
            for _ in 0..NEWTON_POLISH {
                let Ok(next) = step(&pt, &res) else { break };
                match eval_all(fs, &next, &b) {
                    Ok(r) if max_abs(&r) < max_abs(&res) => {
                        pt = next;
                        res = r;
                    }
                    _ => break,
                }
            }
            return Ok(pt);
        }
        if !norm.is_finite() || norm > 1e12 * initial {
            return Err(no_conv(format!("diverged after {it} iterations")));
        }
        pt = step(&pt, &res).map_err(|e| match e {
            Error::SingularJacobian(m) => {
                no_conv(format!("singular Jacobian at iteration {it}: {m}"))
            }
            other => no_conv(other.to_string()),
        })?;
        res = eval_all(fs, &pt, &b).map_err(|e| no_conv(e.to_string()))?;
    }
    Err(no_conv(format!(
        "residual {:e} after {NEWTON_MAX_ITER} iterations",
        max_abs(&res)
    )))
}

/// Multivariate Hensel lifting of the unknowns of `pt0` to precision `N`.
///
/// Requires `v(f_i(pt0)) > 2·v(det J(pt0))` for every `i`. The iteration
/// runs at working precision `N + 2·v(det J) + 4` so that the quotient by
/// `det J` does not eat into the final digits, then truncates to `N`.
pub fn hensel_solve(
    fs: &[EPoly],
    unknowns: &[VarId],
    pt0: &Point<Padic>,
    backend: &PadicBackend,
) -> Result<Point<Padic>> {
    check_square(fs, unknowns)?;
    for u in unknowns {
        if !pt0.contains_key(u) {
            return Err(Error::Shape(format!("seed does not bind unknown {u}")));
        }
    }
    let n = backend.precision();
    let jac = jacobian(fs, unknowns);
    let at_prec = |pt: &Point<Padic>, prec: u32| -> Point<Padic> {
        pt.iter()
            .map(|(k, v)| (k.clone(), v.with_precision(prec)))
            .collect()
    };
    let pt0 = at_prec(pt0, n);
    let d0 = determinant(backend, &eval_matrix(&jac, &pt0, backend)?)?;
    let res0 = eval_all(fs, &pt0, backend)?;
    if d0.is_zero() {
        return Err(Error::HenselConditionFailed(
            "det J vanishes at the seed".into(),
        ));
    }
    let vd = d0.valuation();
    if let Some((i, r)) = res0
        .iter()
        .enumerate()
        .find(|(_, r)| r.valuation() <= 2 * vd)
    {
        return Err(Error::HenselConditionFailed(format!(
            "v(f_{}) = {} is not above 2·v(det J) = {}",
            i + 1,
            r.valuation(),
            2 * vd
        )));
    }

    let work_prec = (n as i64 + 2 * vd.max(0) + 4) as u32;
    let wb = backend.with_precision(work_prec);
    let mut pt = at_prec(&pt0, work_prec);
    for _ in 0..HENSEL_MAX_ITER {
        let r = eval_all(fs, &pt, &wb)?;
        if r.iter().all(Padic::is_zero) {
            break;
        }
        let j = eval_matrix(&jac, &pt, &wb)?;
        let neg: Vec<Padic> = r.iter().map(Padic::neg).collect();
        let dx = solve_square(&wb, &j, &neg)
            .map_err(|e| Error::HenselConditionFailed(format!("Jacobian lost rank: {e}")))?;
        if dx.iter().all(Padic::is_zero) {
            break;
        }
        for (u, d) in unknowns.iter().zip(&dx) {
            let x = pt.get_mut(u).expect("unknown bound");
            *x = x.add(d);
        }
    }

    let out = at_prec(&pt, n);
    let tol = ToleranceSpec::for_precision(n);
    let res = eval_all(fs, &out, backend)?;
    if let Some(r) = res.iter().find(|r| !backend.residual_ok(r, &tol)) {
        return Err(Error::NoConvergence(format!(
            "Hensel lift reached residual valuation {} < {n}",
            r.valuation()
        )));
    }
    Ok(out)
}
