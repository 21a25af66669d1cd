use std::collections::BTreeSet;
use std::fmt;

use super::jacobian::{jacobian, jacobian_det, Matrix};
use super::partial::variables_of;
use crate::epoly::{EPoly, VarId};
use crate::error::{Error, Result};

/// A square system `f_1 = … = f_n = 0` in `n` unknowns, with the symbolic
/// Jacobian determinant cached.
///
/// Parameters are the remaining variables; their derivatives are the
/// successor variables `(c, j + 1)`. Unknown and parameter base names are
/// disjoint so that successors never collide with unknowns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KhovanskiiSystem {
    polys: Vec<EPoly>,
    unknowns: Vec<VarId>,
    parameters: Vec<VarId>,
    jac_det: EPoly,
}

impl KhovanskiiSystem {
    pub fn polys(&self) -> &[EPoly] {
        &self.polys
    }

    pub fn unknowns(&self) -> &[VarId] {
        &self.unknowns
    }

    pub fn parameters(&self) -> &[VarId] {
        &self.parameters
    }

    pub fn jac_det(&self) -> &EPoly {
        &self.jac_det
    }

    pub fn jacobian(&self) -> Matrix {
        jacobian(&self.polys, &self.unknowns)
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Bound `#variables − #equations` on the dimension of the ambient variety.
    pub fn dimension_bound(&self) -> usize {
        self.parameters.len()
    }
}

impl fmt::Display for KhovanskiiSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |vs: &[VarId]| {
            vs.iter()
                .map(VarId::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        let polys: Vec<String> = self.polys.iter().map(EPoly::to_string).collect();
        write!(
            f,
            "[{}] in ({}) over ({}), det = {}",
            polys.join("; "),
            join(&self.unknowns),
            join(&self.parameters),
            self.jac_det
        )
    }
}

/// Validates the variable partition and caches `det J`.
///
/// When `parameters` is `None`, every variable of the system that is not an
/// unknown becomes a parameter (in canonical order).
pub fn khovanskii_build(
    polys: Vec<EPoly>,
    unknowns: Vec<VarId>,
    parameters: Option<Vec<VarId>>,
) -> Result<KhovanskiiSystem> {
    if polys.len() != unknowns.len() {
        return Err(Error::Shape(format!(
            "{} equations in {} unknowns",
            polys.len(),
            unknowns.len()
        )));
    }
    let unknown_set: BTreeSet<&VarId> = unknowns.iter().collect();
    if unknown_set.len() != unknowns.len() {
        return Err(Error::Shape("repeated unknown".into()));
    }
    let used = variables_of(&polys);
    let parameters = match parameters {
        Some(ps) => ps,
        None => used
            .iter()
            .filter(|v| !unknown_set.contains(v))
            .cloned()
            .collect(),
    };
    let param_set: BTreeSet<&VarId> = parameters.iter().collect();
    if param_set.len() != parameters.len() {
        return Err(Error::Shape("repeated parameter".into()));
    }
    if let Some(v) = used
        .iter()
        .find(|v| !unknown_set.contains(v) && !param_set.contains(v))
    {
        return Err(Error::Shape(format!(
            "variable {v} is neither unknown nor parameter"
        )));
    }
    let unknown_bases: BTreeSet<&str> = unknowns.iter().map(VarId::base).collect();
    if let Some(p) = parameters.iter().find(|p| unknown_bases.contains(p.base())) {
        return Err(Error::Shape(format!(
            "parameter {p} shares its base name with an unknown"
        )));
    }
    let jac_det = jacobian_det(&polys, &unknowns)?;
    Ok(KhovanskiiSystem {
        polys,
        unknowns,
        parameters,
        jac_det,
    })
}
