use std::collections::BTreeSet;

use crate::differential::KhovanskiiSystem;
use crate::epoly::VarId;
use crate::error::{Error, Result};

/// One implicit definition `x_j^i` of a Khovanskii formula.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DependentSystem {
    pub level: u32,
    /// Index of the defined coordinate in [`KhovanskiiFormula::bases`].
    pub index: usize,
    /// Unknowns are `(x_j, level)` followed by the witnesses.
    pub system: KhovanskiiSystem,
}

impl DependentSystem {
    /// The defined coordinate `(x_j, level)`.
    pub fn target(&self) -> &VarId {
        &self.system.unknowns()[0]
    }

    pub fn witnesses(&self) -> &[VarId] {
        &self.system.unknowns()[1..]
    }
}

/// Implicit definitions of the dependent coordinates of an order-`m` jet.
///
/// At level `i < m` the coordinates `x_1..x_{ℓ_i}` are free and every
/// `x_j` with `j > ℓ_i` is defined by its own Khovanskii system in the
/// unknowns `(x_j, i)` and fresh witnesses. Parameters are free coordinates
/// at levels `≤ i` and constants (with any derivative order).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KhovanskiiFormula {
    order: u32,
    bases: Vec<String>,
    ell: Vec<usize>,
    constants: Vec<String>,
    systems: Vec<DependentSystem>,
}

impl KhovanskiiFormula {
    /// Validates the partition, coverage of dependent coordinates, witness
    /// freshness and parameter admissibility. Systems are stored sorted by
    /// `(level, index)`.
    pub fn new(
        order: u32,
        bases: Vec<String>,
        ell: Vec<usize>,
        constants: Vec<String>,
        systems: Vec<KhovanskiiSystem>,
    ) -> Result<Self> {
        let n = bases.len();
        if ell.len() != order as usize {
            return Err(Error::Shape(format!(
                "partition has {} entries for order {order}",
                ell.len()
            )));
        }
        if ell.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Shape("partition must be non-increasing".into()));
        }
        if ell.first().is_some_and(|&l| l > n) {
            return Err(Error::Shape(format!("ℓ_0 exceeds the {n} coordinates")));
        }
        let mut names: BTreeSet<&str> = BTreeSet::new();
        for b in bases.iter().chain(&constants) {
            let v = VarId::parse(b)?;
            if v.order() != 0 || !names.insert(b.as_str()) {
                return Err(Error::Shape(format!("bad or repeated name `{b}`")));
            }
        }

        let mut seen_witnesses: BTreeSet<VarId> = BTreeSet::new();
        let mut out = Vec::with_capacity(systems.len());
        for system in systems {
            let target = system
                .unknowns()
                .first()
                .ok_or_else(|| Error::Shape("empty dependent system".into()))?
                .clone();
            let level = target.order();
            if level >= order {
                return Err(Error::Shape(format!(
                    "system for {target} beyond order {order}"
                )));
            }
            let index = bases
                .iter()
                .position(|b| b == target.base())
                .ok_or_else(|| Error::Shape(format!("{target} is not a jet coordinate")))?;
            if index < ell[level as usize] {
                return Err(Error::Shape(format!("{target} is free at level {level}")));
            }
            for w in &system.unknowns()[1..] {
                if names.contains(w.base()) || !seen_witnesses.insert(w.clone()) {
                    return Err(Error::Shape(format!("witness {w} is not fresh")));
                }
            }
            for p in system.parameters() {
                let is_constant = constants.iter().any(|c| c == p.base());
                let free_coordinate = bases
                    .iter()
                    .position(|b| b == p.base())
                    .is_some_and(|j| p.order() <= level && j < ell[p.order() as usize]);
                if !is_constant && !free_coordinate {
                    return Err(Error::Shape(format!(
                        "parameter {p} of the system for {target} is neither a constant nor a free coordinate at level ≤ {level}"
                    )));
                }
            }
            out.push(DependentSystem {
                level,
                index,
                system,
            });
        }
        out.sort_by_key(|d| (d.level, d.index));
        for level in 0..order {
            #[allow(clippy::needless_range_loop)]
            for j in ell[level as usize]..n {
                let count = out
                    .iter()
                    .filter(|d| d.level == level && d.index == j)
                    .count();
                if count != 1 {
                    return Err(Error::Shape(format!(
                        "{} systems define ({}, {level}); expected exactly one",
                        count, bases[j]
                    )));
                }
            }
        }
        let all_witness_bases: BTreeSet<&str> = seen_witnesses.iter().map(VarId::base).collect();
        if all_witness_bases.len() != seen_witnesses.len() {
            return Err(Error::Shape("witness base names must be distinct".into()));
        }
        Ok(KhovanskiiFormula {
            order,
            bases,
            ell,
            constants,
            systems: out,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn bases(&self) -> &[String] {
        &self.bases
    }

    pub fn ell(&self) -> &[usize] {
        &self.ell
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn systems(&self) -> &[DependentSystem] {
        &self.systems
    }

    /// Number of free coordinates at `level` (all of them past the last level).
    pub fn free_count(&self, level: u32) -> usize {
        self.ell
            .get(level as usize)
            .copied()
            .unwrap_or(self.bases.len())
    }

    /// All jet coordinates `(x_j, k)` for `k ≤ order`, grouped by base.
    pub fn jet_variables(&self) -> Vec<VarId> {
        self.bases
            .iter()
            .flat_map(|b| (0..=self.order).map(move |k| VarId::with_order(b, k)))
            .collect()
    }

    /// All witnesses, in system order.
    pub fn witnesses(&self) -> Vec<VarId> {
        self.systems
            .iter()
            .flat_map(|d| d.witnesses().iter().cloned())
            .collect()
    }
}
