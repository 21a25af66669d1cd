use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::build::DLEInstance;
use crate::differential::{jacobian, torsor_residual};
use crate::epoly::VarId;
use crate::error::{Error, Result};
use crate::numeric::{
    eval, eval_all, eval_matrix, neighborhood_check, propagate_numeric, Backend, Jet, Point,
    ToleranceSpec,
};

const COMPLETION_MAX_ITER: usize = 50;
const COMPLETION_STALL: usize = 3;

/// Knobs of [`jet_search`].
#[derive(Clone, Debug)]
pub struct SearchOptions<S> {
    pub seed: u64,
    /// Scale of the real perturbation offsets (ignored over ℚ_p, where the
    /// offsets are multiples of `p^(nbhd_min_val + 1)`).
    pub magnitude: f64,
    /// Starting values for witnesses; missing ones start at zero.
    pub witness_seed: Point<S>,
}

impl<S> SearchOptions<S> {
    pub fn new(seed: u64, magnitude: f64) -> Self {
        SearchOptions {
            seed,
            magnitude,
            witness_seed: Point::new(),
        }
    }
}

/// A jet found near a target, with everything needed to audit it.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSolution<S> {
    pub jet: Jet<S>,
    pub witnesses: Point<S>,
    /// Values of the `φ*_H` equations.
    pub residuals: Vec<S>,
    /// Value of the `φ*_H` inequation.
    pub inequation: S,
    /// `jet − target` per coordinate.
    pub offsets: Point<S>,
    /// Torsor residuals of the level-0 dependent systems, in system order.
    pub torsor_residuals: Vec<S>,
    pub residual_ok: bool,
    pub regular: bool,
    pub within_neighborhood: bool,
    pub success: bool,
    pub seed: u64,
}

fn infeasible(msg: impl Into<String>) -> Error {
    Error::InfeasibleTarget(msg.into())
}

/// Searches for a jet satisfying `φ*_H` close to `target`.
///
/// The target (plus solved witnesses) must already satisfy `H ∧ φ*_H` up to
/// the loose tolerance given by the neighborhood size. The free level-0
/// coordinates are then moved by seeded pseudo-random offsets, the level-0
/// dependent coordinates and their witnesses are re-solved with the
/// backend's implicit solver, and every higher coordinate and remaining
/// witness is completed by a least-change Gauss–Newton iteration on the
/// `φ*_H` equations. The offsets only stand in for generic elements; no
/// independence is certified.
pub fn jet_search<B: Backend>(
    inst: &DLEInstance,
    target: &Jet<B::Scalar>,
    constants: &Jet<B::Scalar>,
    backend: &B,
    opts: &SearchOptions<B::Scalar>,
) -> Result<JetSolution<B::Scalar>> {
    let h = &inst.h;
    let tol = &inst.tolerance;
    let phi_h = &inst.phi_star_h;
    let jet_vars = h.jet_variables();

    let mut pt: Point<B::Scalar> = constants.values().clone();
    let mut target_pt = Point::new();
    for v in &jet_vars {
        let x = target
            .get(v)
            .ok_or_else(|| Error::Shape(format!("target does not bind {v}")))?;
        pt.insert(v.clone(), x.clone());
        target_pt.insert(v.clone(), x.clone());
    }
    for w in h.witnesses() {
        let x = opts
            .witness_seed
            .get(&w)
            .cloned()
            .unwrap_or_else(|| backend.zero());
        pt.insert(w, x);
    }
    if let Some(v) = phi_h.variables().into_iter().find(|v| !pt.contains_key(v)) {
        return Err(Error::Shape(format!("no value for {v}")));
    }

    // Feasibility of the target.
    for dep in h.systems() {
        let sys = &dep.system;
        let sol = backend
            .implicit_solve(sys.polys(), sys.unknowns(), &pt, tol)
            .map_err(|e| infeasible(format!("system for {}: {e}", dep.target())))?;
        let t = dep.target();
        if !backend.close(&sol[t], &pt[t], tol) {
            return Err(infeasible(format!(
                "system for {t} has its nearby solution at {}",
                backend.format(&sol[t])
            )));
        }
        let det = eval(sys.jac_det(), &sol, backend)?;
        if !backend.regular(&det, tol) {
            return Err(infeasible(format!(
                "det J of the system for {t} is not regular"
            )));
        }
        for w in dep.witnesses() {
            pt.insert(w.clone(), sol[w].clone());
        }
    }
    let loose = ToleranceSpec {
        eps_res: tol.eps_res.max(tol.radius),
        res_min_val: tol.res_min_val.min(tol.nbhd_min_val),
        ..tol.clone()
    };
    let res = eval_all(&phi_h.equations, &pt, backend)?;
    if let Some(i) = res.iter().position(|r| !backend.residual_ok(r, &loose)) {
        return Err(infeasible(format!(
            "target violates equation {} of φ*_H: {} = {}",
            i + 1,
            phi_h.equations[i],
            backend.format(&res[i])
        )));
    }
    if !backend.regular(&eval(&phi_h.inequation, &pt, backend)?, tol) {
        return Err(infeasible("target violates the inequation of φ*_H"));
    }

    // Perturb the free level-0 coordinates.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for b in &h.bases()[..h.free_count(0)] {
        let v = VarId::new(b);
        let dx = backend.small_offset(&mut rng, opts.magnitude, tol);
        let x = backend.add(&pt[&v], &dx);
        pt.insert(v, x);
    }

    // Re-solve the level-0 dependent coordinates.
    for dep in h.systems().iter().filter(|d| d.level == 0) {
        let sys = &dep.system;
        let sol = backend.implicit_solve(sys.polys(), sys.unknowns(), &pt, tol)?;
        for u in sys.unknowns() {
            pt.insert(u.clone(), sol[u].clone());
        }
    }

    // Complete higher levels and their witnesses.
    let mut unknowns: Vec<VarId> = jet_vars
        .iter()
        .filter(|v| v.order() >= 1)
        .cloned()
        .collect();
    for dep in h.systems().iter().filter(|d| d.level >= 1) {
        unknowns.extend(dep.witnesses().iter().cloned());
    }
    if !unknowns.is_empty() {
        complete(&phi_h.equations, &unknowns, &mut pt, backend)?;
    }

    // Report.
    let residuals = eval_all(&phi_h.equations, &pt, backend)?;
    let inequation = eval(&phi_h.inequation, &pt, backend)?;
    let residual_ok = residuals.iter().all(|r| backend.residual_ok(r, tol));
    let regular = backend.regular(&inequation, tol);
    let jet_pt: Point<B::Scalar> = jet_vars
        .iter()
        .map(|v| (v.clone(), pt[v].clone()))
        .collect();
    let within_neighborhood = neighborhood_check(&jet_pt, &target_pt, backend, tol)?;
    let offsets = jet_vars
        .iter()
        .map(|v| (v.clone(), backend.sub(&jet_pt[v], &target_pt[v])))
        .collect();
    let witnesses = h.witnesses().into_iter().map(|w| {
        let x = pt[&w].clone();
        (w, x)
    });
    let witnesses: Point<B::Scalar> = witnesses.collect();

    let mut torsor_residuals = Vec::new();
    if h.order() >= 1 {
        let none = Jet::new(0);
        for dep in h.systems().iter().filter(|d| d.level == 0) {
            let sys = &dep.system;
            let tangent_jet = propagate_numeric(sys, &pt, &none, 1, backend, tol)?;
            let mut tangent = Point::new();
            let t = dep.target();
            tangent.insert(t.clone(), pt[&t.succ()].clone());
            for w in dep.witnesses() {
                let dw = tangent_jet
                    .get(&w.succ())
                    .cloned()
                    .ok_or_else(|| Error::Shape(format!("no tangent for {w}")))?;
                tangent.insert(w.clone(), dw);
            }
            let report = torsor_residual(
                sys.polys(),
                sys.unknowns(),
                &pt,
                &tangent,
                &none,
                backend,
                tol,
            )?;
            torsor_residuals.extend(report.residuals);
        }
    }

    Ok(JetSolution {
        jet: Jet::from_point(jet_pt),
        witnesses,
        residuals,
        inequation,
        offsets,
        torsor_residuals,
        residual_ok,
        regular,
        within_neighborhood,
        success: residual_ok && regular && within_neighborhood,
        seed: opts.seed,
    })
}

/// Least-change Gauss–Newton on `eqs` in `unknowns`, in place.
fn complete<B: Backend>(
    eqs: &[crate::epoly::EPoly],
    unknowns: &[VarId],
    pt: &mut Point<B::Scalar>,
    backend: &B,
) -> Result<()> {
    let jac = jacobian(eqs, unknowns);
    let size = |r: &[B::Scalar]| r.iter().map(|x| backend.abs_value(x)).fold(0.0, f64::max);
    let mut r = eval_all(eqs, pt, backend)?;
    let mut best = size(&r);
    let mut stall = 0;
    for _ in 0..COMPLETION_MAX_ITER {
        if best == 0.0 || stall >= COMPLETION_STALL {
            break;
        }
        let j = eval_matrix(&jac, pt, backend)?;
        let dx = backend.least_change_step(&j, &r);
        let mut next = pt.clone();
        for (u, d) in unknowns.iter().zip(&dx) {
            let x = backend.sub(&next[u], d);
            next.insert(u.clone(), x);
        }
        let r_next = match eval_all(eqs, &next, backend) {
            Ok(r) => r,
            Err(_) => break,
        };
        let s = size(&r_next);
        if s < best {
            best = s;
            stall = 0;
            *pt = next;
            r = r_next;
        } else {
            stall += 1;
            if s == best {
                *pt = next;
                r = r_next;
            }
        }
    }
    if !best.is_finite() {
        return Err(Error::NoConvergence("jet completion diverged".into()));
    }
    Ok(())
}
