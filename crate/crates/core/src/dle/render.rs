use std::collections::BTreeSet;

use super::build::DLEInstance;
use crate::epoly::{EPoly, VarId};
use crate::error::{Error, Result};
use crate::term::{parse_formula, Atom, Formula, Term};

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

/// The conjunction printed by the term printer, so that the core reads back
/// to a formula with the same text.
fn conj(eqs: &[EPoly], nes: &[EPoly]) -> String {
    let mut parts: Vec<String> = eqs.iter().map(|e| format!("{e} = 0")).collect();
    parts.extend(nes.iter().map(|e| format!("{e} != 0")));
    if parts.is_empty() {
        parts.push("1 != 0".to_string());
    }
    parse_formula(&parts.join(" & "))
        .expect("printed E-polynomials parse")
        .to_string()
}

fn rename_term(t: &Term, rename: &dyn Fn(&VarId) -> Option<VarId>) -> Term {
    let r = |x: &Term| Box::new(rename_term(x, rename));
    match t {
        Term::Rat(q) => Term::Rat(q.clone()),
        Term::Var(v) => Term::Var(rename(v).unwrap_or_else(|| v.clone())),
        Term::Add(a, b) => Term::Add(r(a), r(b)),
        Term::Neg(a) => Term::Neg(r(a)),
        Term::Mul(a, b) => Term::Mul(r(a), r(b)),
        Term::Pow(a, n) => Term::Pow(r(a), *n),
        Term::Exp(a) => Term::Exp(r(a)),
        Term::D(a) => Term::D(r(a)),
        Term::Inv(a) => Term::Inv(r(a)),
    }
}

/// A prefix `alpha_`, lengthened until no renamed name collides with a
/// variable of the instance.
fn alpha_prefix(inst: &DLEInstance) -> String {
    let h = &inst.h;
    let taken: BTreeSet<String> = inst
        .star
        .variables()
        .iter()
        .chain(&inst.phi_star_h.variables())
        .chain(&h.witnesses())
        .map(|v| v.base().to_string())
        .chain(h.constants().iter().cloned())
        .collect();
    let bases = h.bases();
    let mut prefix = "alpha_".to_string();
    while bases
        .iter()
        .any(|b| taken.contains(&format!("{prefix}{b}")))
    {
        prefix.push('_');
        prefix.insert(0, 'a');
    }
    prefix
}

/// The three quantifier-free parts of a rendered instance, in order:
/// the Khovanskii formula `H`, the cleared system `φ*_H`, and `φ` with its
/// coordinates renamed to the existential `α` variables.
pub fn instance_cores(inst: &DLEInstance) -> Vec<String> {
    let h = &inst.h;
    let mut h_eqs = Vec::new();
    let mut h_nes = Vec::new();
    for dep in h.systems() {
        h_eqs.extend(dep.system.polys().iter().cloned());
        h_nes.push(dep.system.jac_det().clone());
    }
    let phi_h = &inst.phi_star_h;
    let prefix = alpha_prefix(inst);
    let bases = h.bases().to_vec();
    let rename = move |v: &VarId| {
        bases
            .iter()
            .any(|b| b == v.base())
            .then(|| VarId::with_order(&format!("{prefix}{}", v.base()), v.order()))
    };
    let renamed = Formula {
        atoms: inst
            .phi
            .atoms
            .iter()
            .map(|a| Atom {
                term: rename_term(&a.term, &rename),
                rel: a.rel,
            })
            .collect(),
    };
    vec![
        conj(&h_eqs, &h_nes),
        conj(&phi_h.equations, std::slice::from_ref(&phi_h.inequation)),
        renamed.to_string(),
    ]
}

/// Renders the full universally quantified implication of an instance.
///
/// Quantifier-free parts are enclosed in braces and can be re-read with
/// [`parse_rendered_cores`].
pub fn render_instance(inst: &DLEInstance) -> String {
    let h = &inst.h;
    let cores = instance_cores(inst);
    let jet = h.jet_variables();
    let witnesses = h.witnesses();
    let prefix = alpha_prefix(inst);
    let alphas: Vec<String> = h.bases().iter().map(|b| format!("{prefix}{b}")).collect();
    let chi_args: Vec<String> = alphas
        .iter()
        .zip(h.bases())
        .flat_map(|(a, b)| {
            (0..=h.order()).map(move |k| {
                let mut t = a.clone();
                for _ in 0..k {
                    t = format!("D({t})");
                }
                format!("{t} - {}", VarId::with_order(b, k))
            })
        })
        .collect();
    let premise = if witnesses.is_empty() {
        format!("{{{}}} & {{{}}}", cores[0], cores[1])
    } else {
        format!(
            "exists {}. {{{}}} & {{{}}}",
            join(&witnesses, ", "),
            cores[0],
            cores[1]
        )
    };
    format!(
        "forall d. forall {}. (({premise}) -> (exists {}. {{{}}} & chi({}; d)))",
        join(&jet, ", "),
        alphas.join(", "),
        cores[2],
        chi_args.join(", ")
    )
}

/// Extracts and parses every `{…}` part of a rendered instance.
pub fn parse_rendered_cores(text: &str) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find('{') {
        let end = rest[start..]
            .find('}')
            .ok_or_else(|| Error::Format("unbalanced `{` in rendered instance".into()))?;
        out.push(parse_formula(&rest[start + 1..start + end])?);
        rest = &rest[start + end + 1..];
    }
    Ok(out)
}
