//! Instance files with `[PHI]`, `[H]`, `[PHISTARH]` and `[TOLERANCE]`
//! sections.
//!
//! ```text
//! [PHI]
//! D(x) - 1 = 0
//! [H]
//! order=1
//! bases=x,y
//! ell=1
//! constants=
//! system unknowns=y,z params=x: E(z) - x; y - z^2
//! [PHISTARH]
//! eq=...
//! ne=...
//! [TOLERANCE]
//! eps_res=...
//! ```
//!
//! `[PHISTARH]` is derived data: reading rebuilds it and rejects a file
//! whose section disagrees.

use std::fmt::Write as _;

use super::build::DLEInstance;
use super::formula::KhovanskiiFormula;
use crate::differential::khovanskii_build;
use crate::epoly::{EPoly, VarId};
use crate::error::{Error, Result};
use crate::numeric::ToleranceSpec;
use crate::term::{parse_epoly, parse_formula};

const SECTIONS: [&str; 4] = ["[PHI]", "[H]", "[PHISTARH]", "[TOLERANCE]"];

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn write_instance(inst: &DLEInstance) -> String {
    let h = &inst.h;
    let mut s = String::new();
    let _ = writeln!(s, "[PHI]\n{}", inst.phi);
    let _ = writeln!(s, "[H]");
    let _ = writeln!(s, "order={}", h.order());
    let _ = writeln!(s, "bases={}", h.bases().join(","));
    let _ = writeln!(s, "ell={}", join(h.ell()));
    let _ = writeln!(s, "constants={}", h.constants().join(","));
    for dep in h.systems() {
        let polys: Vec<String> = dep.system.polys().iter().map(EPoly::to_string).collect();
        let _ = writeln!(
            s,
            "system unknowns={} params={}: {}",
            join(dep.system.unknowns()),
            join(dep.system.parameters()),
            polys.join("; ")
        );
    }
    let _ = writeln!(s, "[PHISTARH]");
    for e in &inst.phi_star_h.equations {
        let _ = writeln!(s, "eq={e}");
    }
    let _ = writeln!(s, "ne={}", inst.phi_star_h.inequation);
    let _ = writeln!(s, "[TOLERANCE]");
    s.push_str(&inst.tolerance.to_lines());
    s
}

type Sections<'a> = ([Vec<&'a str>; 4], [bool; 4]);

fn split_sections(text: &str) -> Result<Sections<'_>> {
    let mut out: [Vec<&str>; 4] = Default::default();
    let mut current: Option<usize> = None;
    let mut seen = [false; 4];
    for line in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        if line.starts_with('[') {
            let i = SECTIONS
                .iter()
                .position(|s| *s == line)
                .ok_or_else(|| Error::Format(format!("unknown section {line}")))?;
            if seen[i] {
                return Err(Error::Format(format!("repeated section {line}")));
            }
            seen[i] = true;
            current = Some(i);
            continue;
        }
        let i = current.ok_or_else(|| Error::Format(format!("`{line}` outside any section")))?;
        out[i].push(line);
    }
    Ok((out, seen))
}

fn require(seen: &[bool; 4], which: &[usize]) -> Result<()> {
    match which.iter().find(|&&i| !seen[i]) {
        Some(&i) => Err(Error::Format(format!("missing section {}", SECTIONS[i]))),
        None => Ok(()),
    }
}

fn parse_vars(list: &str) -> Result<Vec<VarId>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(VarId::parse)
        .collect()
}

fn parse_names(list: &str) -> Vec<String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn parse_h(lines: &[&str]) -> Result<KhovanskiiFormula> {
    let mut order = None;
    let mut bases = Vec::new();
    let mut ell = Vec::new();
    let mut constants = Vec::new();
    let mut systems = Vec::new();
    for line in lines {
        if let Some(rest) = line.strip_prefix("system ") {
            let (head, polys) = rest
                .split_once(':')
                .ok_or_else(|| Error::Format(format!("system line without `:`: `{line}`")))?;
            let mut unknowns = None;
            let mut params = None;
            for part in head.split_whitespace() {
                match part.split_once('=') {
                    Some(("unknowns", v)) => unknowns = Some(parse_vars(v)?),
                    Some(("params", v)) => params = Some(parse_vars(v)?),
                    _ => return Err(Error::Format(format!("bad system field `{part}`"))),
                }
            }
            let polys = polys
                .split(';')
                .map(|p| parse_epoly(p.trim()))
                .collect::<Result<Vec<_>>>()?;
            let unknowns =
                unknowns.ok_or_else(|| Error::Format("system without unknowns".into()))?;
            systems.push(khovanskii_build(polys, unknowns, params)?);
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("expected key=value in [H], got `{line}`")))?;
        match k.trim() {
            "order" => {
                order = Some(
                    v.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Format(format!("bad order `{v}`")))?,
                )
            }
            "bases" => bases = parse_names(v),
            "ell" => {
                ell = parse_names(v)
                    .iter()
                    .map(|x| {
                        x.parse::<usize>()
                            .map_err(|_| Error::Format(format!("bad ell `{v}`")))
                    })
                    .collect::<Result<_>>()?
            }
            "constants" => constants = parse_names(v),
            other => return Err(Error::Format(format!("unknown [H] key `{other}`"))),
        }
    }
    let order = order.ok_or_else(|| Error::Format("[H] lacks order".into()))?;
    KhovanskiiFormula::new(order, bases, ell, constants, systems)
}

/// Reads an instance file and rebuilds `φ*_H`.
pub fn read_instance(text: &str) -> Result<DLEInstance> {
    let ([phi, h, phistar, tol], seen) = split_sections(text)?;
    require(&seen, &[0, 1, 2, 3])?;
    let phi = parse_formula(&phi.join(" "))?;
    let h = parse_h(&h)?;
    let tol = ToleranceSpec::from_lines(&tol.join("\n"))?;
    let inst = DLEInstance::build(phi, h, tol)?;
    check_phistar(&inst, &phistar)?;
    Ok(inst)
}

/// Builds an instance from a source file with `[PHI]` and `[H]`.
///
/// `[TOLERANCE]` is optional and falls back to `default_tol`; a `[PHISTARH]`
/// section, if present, must match the built system.
pub fn read_instance_source(text: &str, default_tol: &ToleranceSpec) -> Result<DLEInstance> {
    let ([phi, h, phistar, tol], seen) = split_sections(text)?;
    require(&seen, &[0, 1])?;
    let phi = parse_formula(&phi.join(" "))?;
    let h = parse_h(&h)?;
    let tol = if seen[3] {
        ToleranceSpec::from_lines(&tol.join("\n"))?
    } else {
        default_tol.clone()
    };
    let inst = DLEInstance::build(phi, h, tol)?;
    if seen[2] {
        check_phistar(&inst, &phistar)?;
    }
    Ok(inst)
}

fn check_phistar(inst: &DLEInstance, phistar: &[&str]) -> Result<()> {
    let mut eqs = Vec::new();
    let mut ne = None;
    for line in phistar {
        match line.split_once('=') {
            Some(("eq", e)) => eqs.push(parse_epoly(e.trim())?),
            Some(("ne", e)) if ne.is_none() => ne = Some(parse_epoly(e.trim())?),
            _ => return Err(Error::Format(format!("bad [PHISTARH] line `{line}`"))),
        }
    }
    let ps = &inst.phi_star_h;
    if eqs != ps.equations || ne.as_ref() != Some(&ps.inequation) {
        return Err(Error::Format(
            "[PHISTARH] does not match the system built from [PHI] and [H]".into(),
        ));
    }
    Ok(())
}
