use std::collections::BTreeSet;

use super::formula::KhovanskiiFormula;
use crate::differential::propagate_symbolic;
use crate::epoly::{EPoly, VarId};
use crate::error::{Error, Result};
use crate::numeric::ToleranceSpec;
use crate::term::{star_transform, Formula, StarSystem};

/// The cleared system `φ*_H`: equations plus one aggregated inequation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiStarH {
    pub equations: Vec<EPoly>,
    pub inequation: EPoly,
}

impl PhiStarH {
    pub fn variables(&self) -> BTreeSet<VarId> {
        self.equations
            .iter()
            .chain(std::iter::once(&self.inequation))
            .flat_map(EPoly::variables)
            .collect()
    }
}

/// Successor clause `x_j^{k+1} = t^{1,*}` of one dependent system, before
/// and after clearing its denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Clause {
    pub successor: VarId,
    pub numerator: EPoly,
    pub denominator: EPoly,
    /// `x_j^{k+1}·den − num`, or `x_j^{k+1}` when `num = 0`.
    pub cleared: EPoly,
}

/// The successor clauses of `h`, one per dependent system.
pub fn successor_clauses(h: &KhovanskiiFormula) -> Result<Vec<Clause>> {
    let mut out = Vec::with_capacity(h.systems().len());
    for dep in h.systems() {
        let level1 = propagate_symbolic(&dep.system, 1)?;
        let t = &level1[0][0];
        let successor = dep.target().succ();
        let x1 = EPoly::var(successor.clone());
        let cleared = if t.num.is_zero() {
            x1
        } else {
            &(&x1 * &t.den) - &t.num
        };
        out.push(Clause {
            successor,
            numerator: t.num.clone(),
            denominator: t.den.clone(),
            cleared,
        });
    }
    Ok(out)
}

/// Builds `φ*_H` from the starred formula and a Khovanskii formula.
///
/// Equations are those of `φ*`, every equation of every system of `H`, and
/// one cleared successor clause per dependent system. The inequation is
/// the product of the inequations of `φ*` and of each system's `det J`,
/// which also covers every clause denominator.
pub fn build_phi_star_h(star: &StarSystem, h: &KhovanskiiFormula) -> Result<PhiStarH> {
    if star.order != h.order() {
        return Err(Error::Shape(format!(
            "formula has order {} but H has order {}",
            star.order,
            h.order()
        )));
    }
    let known: BTreeSet<&str> = h
        .bases()
        .iter()
        .chain(h.constants())
        .map(String::as_str)
        .collect();
    if let Some(b) = star.bases().iter().find(|b| !known.contains(b.as_str())) {
        return Err(Error::Shape(format!(
            "variable `{b}` is neither a jet coordinate nor a constant of H"
        )));
    }
    let mut equations = star.equations.clone();
    let mut inequation: EPoly = star.inequations.iter().cloned().product();
    for dep in h.systems() {
        equations.extend(dep.system.polys().iter().cloned());
        inequation = &inequation * dep.system.jac_det();
    }
    equations.extend(successor_clauses(h)?.into_iter().map(|c| c.cleared));
    Ok(PhiStarH {
        equations,
        inequation,
    })
}

/// A rendered-ready instance of the differential-exponential axiom scheme.
#[derive(Clone, PartialEq, Debug)]
pub struct DLEInstance {
    pub phi: Formula,
    pub star: StarSystem,
    pub h: KhovanskiiFormula,
    pub phi_star_h: PhiStarH,
    pub tolerance: ToleranceSpec,
}

impl DLEInstance {
    pub fn build(phi: Formula, h: KhovanskiiFormula, tolerance: ToleranceSpec) -> Result<Self> {
        tolerance.validate()?;
        let star = star_transform(&phi)?;
        let phi_star_h = build_phi_star_h(&star, &h)?;
        Ok(DLEInstance {
            phi,
            star,
            h,
            phi_star_h,
            tolerance,
        })
    }
}
