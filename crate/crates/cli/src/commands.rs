//! Subcommand implementations, generic over the numeric backend.

use std::collections::BTreeSet;
use std::path::Path;

use expderiv_core::differential::{
    delta_shift, jacobian, khovanskii_build, partial_derivative, solve_dependent_jet,
    torsor_residual, variables_of, KhovanskiiSystem,
};
use expderiv_core::dle::{
    catalog::{demo_catalog, DemoCase},
    instance_cores, jet_search, read_instance, read_instance_source, render_instance,
    write_instance, DLEInstance, SearchOptions,
};
use expderiv_core::epoly::{layer_decompose, ord};
use expderiv_core::numeric::{
    eval, hensel_solve, khovanskii_check, newton_solve, parse_point, propagate_numeric, Backend,
    Jet, PadicBackend, Point, RealBackend, ToleranceSpec,
};
use expderiv_core::term::{parse_epoly, parse_formula, parse_term, star_transform, term_to_epoly};
use expderiv_core::{EPoly, Error, Result, VarId};

use crate::report::Report;
use crate::{BackendKind, Cli, Command, GlobalOpts, SystemArgs};

/// What a subcommand produced.
pub enum Outcome {
    Report(Report),
    /// Text printed verbatim (an instance file written to stdout).
    Raw(String),
}

/// Runs `f` with the backend selected by the global options.
macro_rules! with_backend {
    ($g:expr, $f:ident($($arg:expr),* $(,)?)) => {
        match $g.backend {
            BackendKind::Real => $f(&RealBackend, $($arg),*),
            BackendKind::Padic => $f(&padic_backend($g)?, $($arg),*),
        }
    };
}

fn padic_backend(g: &GlobalOpts) -> Result<PadicBackend> {
    PadicBackend::new(g.p, g.precision)
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))
}

/// The positional input, or the contents of `--in`.
fn input(arg: &Option<String>, g: &GlobalOpts) -> Result<String> {
    match (arg, &g.input) {
        (Some(s), _) => Ok(s.clone()),
        (None, Some(path)) => Ok(read_file(path)?.trim().to_string()),
        (None, None) => Err(Error::Format(
            "missing input: pass it inline or with --in".into(),
        )),
    }
}

fn tolerance(g: &GlobalOpts, base: ToleranceSpec) -> Result<ToleranceSpec> {
    let tol = ToleranceSpec {
        eps_res: g.eps_res.unwrap_or(base.eps_res),
        eps_reg: g.eps_reg.unwrap_or(base.eps_reg),
        radius: g.radius.unwrap_or(base.radius),
        ..base
    };
    tol.validate()?;
    Ok(tol)
}

fn default_tolerance(g: &GlobalOpts) -> Result<ToleranceSpec> {
    tolerance(g, ToleranceSpec::for_precision(g.precision))
}

fn var_list(src: &str) -> Result<Vec<VarId>> {
    src.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(VarId::parse)
        .collect()
}

fn polys(src: &str) -> Result<Vec<EPoly>> {
    src.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_epoly)
        .collect()
}

fn system(args: &SystemArgs) -> Result<KhovanskiiSystem> {
    let fs = polys(&args.system)?;
    let params = args.params.as_deref().map(var_list).transpose()?;
    let unknowns = match &args.unknowns {
        Some(u) => var_list(u)?,
        None => {
            let skip: BTreeSet<VarId> = params.iter().flatten().cloned().collect();
            variables_of(&fs)
                .into_iter()
                .filter(|v| !skip.contains(v))
                .collect()
        }
    };
    khovanskii_build(fs, unknowns, params)
}

fn jet_key(v: &VarId) -> String {
    format!("{}:{}", v.base(), v.order())
}

fn parse_jet<B: Backend>(src: &str, b: &B) -> Result<Jet<B::Scalar>> {
    Ok(Jet::from_point(parse_point(src, b)?))
}

fn formatted<B: Backend>(b: &B, xs: &[B::Scalar]) -> Vec<String> {
    xs.iter().map(|x| b.format(x)).collect()
}

fn eval_cmd<B: Backend>(b: &B, p: &EPoly, point: &str) -> Result<Report> {
    let pt = parse_point(point, b)?;
    let mut r = Report::new();
    r.text("backend", b.name())
        .text("value", b.format(&eval(p, &pt, b)?));
    Ok(r)
}

fn khov_check_cmd<B: Backend>(
    b: &B,
    h: &KhovanskiiSystem,
    point: &str,
    tol: &ToleranceSpec,
) -> Result<Report> {
    let pt = parse_point(point, b)?;
    let rep = khovanskii_check(h, &pt, b, tol)?;
    let mut r = Report::new();
    r.text("backend", b.name())
        .list("residual", &formatted(b, &rep.residuals))
        .text("det", b.format(&rep.det))
        .flag("residual_ok", rep.residual_ok)
        .flag("regular", rep.regular)
        .verdict("verdict", rep.verdict)
        .int("dimension_bound", rep.dimension_bound as i64);
    Ok(r)
}

fn propagate_cmd<B: Backend>(
    b: &B,
    h: &KhovanskiiSystem,
    point: &str,
    jet: &str,
    levels: u32,
    tol: &ToleranceSpec,
) -> Result<Report> {
    let pt = parse_point(point, b)?;
    let pj = parse_jet(jet, b)?;
    let out = propagate_numeric(h, &pt, &pj, levels, b, tol)?;
    let mut r = Report::new();
    r.text("backend", b.name()).int("levels", i64::from(levels));
    for (v, x) in out.values() {
        r.text(&jet_key(v), b.format(x));
    }
    Ok(r)
}

fn torsor_cmd<B: Backend>(
    b: &B,
    generators: &[EPoly],
    unknowns: &[VarId],
    point: &str,
    tangent: &str,
    jet: &str,
    tol: &ToleranceSpec,
) -> Result<Report> {
    let a = parse_point(point, b)?;
    let t = parse_point(tangent, b)?;
    let pj = parse_jet(jet, b)?;
    let rep = torsor_residual(generators, unknowns, &a, &t, &pj, b, tol)?;
    let mut r = Report::new();
    r.text("backend", b.name())
        .list("residual", &formatted(b, &rep.residuals))
        .list("value", &formatted(b, &rep.values))
        .verdict("member", rep.member);
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn solve_jet_cmd<B: Backend>(
    b: &B,
    generators: &[EPoly],
    free: &[VarId],
    dependent: &[VarId],
    point: &str,
    tangent: &str,
    jet: &str,
    tol: &ToleranceSpec,
) -> Result<Report> {
    let a = parse_point(point, b)?;
    let ft = parse_point(tangent, b)?;
    let pj = parse_jet(jet, b)?;
    let dep = solve_dependent_jet(generators, free, dependent, &a, &ft, &pj, b, tol)?;
    let mut all = ft.clone();
    all.extend(dep.iter().map(|(k, v)| (k.clone(), v.clone())));
    let unknowns: Vec<VarId> = free.iter().chain(dependent).cloned().collect();
    let rep = torsor_residual(generators, &unknowns, &a, &all, &pj, b, tol)?;
    let mut r = Report::new();
    r.text("backend", b.name());
    for (v, x) in &dep {
        r.text(&format!("tangent.{v}"), b.format(x));
    }
    r.list("residual", &formatted(b, &rep.residuals));
    Ok(r)
}

fn instance_source(
    demo: &Option<String>,
    g: &GlobalOpts,
    source: bool,
) -> Result<(DLEInstance, Option<DemoCase>)> {
    if let Some(name) = demo {
        let case = demo_catalog()
            .into_iter()
            .find(|c| c.name == name)
            .ok_or_else(|| {
                let names: Vec<&str> = demo_catalog().iter().map(|c| c.name).collect();
                Error::Format(format!(
                    "unknown demo `{name}` (known: {})",
                    names.join(", ")
                ))
            })?;
        let mut inst = case.instance.clone();
        inst.tolerance = tolerance(g, inst.tolerance)?;
        return Ok((inst, Some(case)));
    }
    let path = g
        .input
        .as_ref()
        .ok_or_else(|| Error::Format("pass an instance with --in or a case with --demo".into()))?;
    let text = read_file(path)?;
    let mut inst = if source {
        read_instance_source(&text, &default_tolerance(g)?)?
    } else {
        read_instance(&text)?
    };
    inst.tolerance = tolerance(g, inst.tolerance)?;
    Ok((inst, None))
}

/// Demo values re-read in the selected backend.
fn demo_jet<B: Backend>(b: &B, jet: &Jet<f64>) -> Result<Jet<B::Scalar>> {
    Jet::from_text(&jet.to_text(&RealBackend), b)
}

fn dle_solve_cmd<B: Backend>(
    b: &B,
    inst: &DLEInstance,
    demo: Option<&DemoCase>,
    target: &Option<String>,
    constants: &Option<String>,
    witness: &Option<String>,
    opts: (u64, f64),
) -> Result<Report> {
    let target = match (target, demo) {
        (Some(t), _) => parse_jet(t, b)?,
        (None, Some(d)) => demo_jet(b, &d.target)?,
        (None, None) => return Err(Error::Format("missing --target".into())),
    };
    let constants = match (constants, demo) {
        (Some(c), _) => parse_jet(c, b)?,
        (None, Some(d)) => demo_jet(b, &d.constants)?,
        (None, None) => Jet::new(0),
    };
    let mut search = SearchOptions::new(opts.0, opts.1);
    search.witness_seed = match (witness, demo) {
        (Some(w), _) => parse_point(w, b)?,
        (None, Some(d)) => demo_jet(b, &Jet::from_point(d.witness_seed.clone()))?.into_point(),
        (None, None) => Point::new(),
    };
    let sol = jet_search(inst, &target, &constants, b, &search)?;
    let mut r = Report::new();
    r.text("backend", b.name());
    for (v, x) in sol.jet.values() {
        r.text(&jet_key(v), b.format(x));
    }
    for (v, x) in &sol.witnesses {
        r.text(&format!("witness.{v}"), b.format(x));
    }
    r.list("residual", &formatted(b, &sol.residuals))
        .text("inequation", b.format(&sol.inequation));
    for (v, x) in &sol.offsets {
        r.text(&format!("offset.{}", jet_key(v)), b.format(x));
    }
    r.list("torsor_residual", &formatted(b, &sol.torsor_residuals))
        .flag("residual_ok", sol.residual_ok)
        .flag("regular", sol.regular)
        .flag("within_neighborhood", sol.within_neighborhood)
        .verdict("success", sol.success)
        .text("seed", sol.seed);
    Ok(r)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let mut r = Report::new();
    match &cli.command {
        Command::Normalize { expr } => {
            let p = term_to_epoly(&parse_term(&input(expr, g)?)?)?;
            r.text("normal", &p)
                .int("height", i64::from(p.height()))
                .int("terms", p.len() as i64);
        }
        Command::Ord { expr } => {
            let p = parse_epoly(&input(expr, g)?)?;
            let o = ord(&p);
            r.text("ord", &o)
                .int("height", i64::from(p.height()))
                .list("rank", o.coeffs())
                .list("layer", &layer_decompose(&p));
        }
        Command::Diff { expr, var } => {
            let p = parse_epoly(&input(expr, g)?)?;
            r.text("derivative", partial_derivative(&p, &VarId::parse(var)?));
        }
        Command::DeltaShift { expr } => {
            r.text("shift", delta_shift(&parse_epoly(&input(expr, g)?)?));
        }
        Command::Eval { expr, point } => {
            let p = parse_epoly(&input(expr, g)?)?;
            r = with_backend!(g, eval_cmd(&p, point))?;
        }
        Command::Jacobian { sys } => {
            let h = system(sys)?;
            r.list("unknowns", h.unknowns())
                .matrix("jacobian", &jacobian(h.polys(), h.unknowns()))
                .text("det", h.jac_det());
        }
        Command::KhovBuild { sys } => {
            let h = system(sys)?;
            r.list("equation", h.polys())
                .list("unknowns", h.unknowns())
                .list("parameters", h.parameters())
                .text("det", h.jac_det())
                .int("dimension_bound", h.dimension_bound() as i64);
        }
        Command::KhovCheck { sys, point } => {
            let h = system(sys)?;
            let tol = default_tolerance(g)?;
            r = with_backend!(g, khov_check_cmd(&h, point, &tol))?;
        }
        Command::Propagate {
            sys,
            point,
            jet,
            levels,
        } => {
            let h = system(sys)?;
            let tol = default_tolerance(g)?;
            r = with_backend!(g, propagate_cmd(&h, point, jet, *levels, &tol))?;
        }
        Command::Torsor {
            system,
            unknowns,
            point,
            tangent,
            jet,
        } => {
            let (fs, unknowns) = (polys(system)?, var_list(unknowns)?);
            let tol = default_tolerance(g)?;
            r = with_backend!(g, torsor_cmd(&fs, &unknowns, point, tangent, jet, &tol))?;
        }
        Command::SolveJet {
            system,
            free,
            dependent,
            point,
            tangent,
            jet,
        } => {
            let fs = polys(system)?;
            let (free, dependent) = (var_list(free)?, var_list(dependent)?);
            let tol = default_tolerance(g)?;
            r = with_backend!(
                g,
                solve_jet_cmd(&fs, &free, &dependent, point, tangent, jet, &tol)
            )?;
        }
        Command::Newton { sys, point } => {
            if g.backend != BackendKind::Real {
                return Err(Error::Unsupported(
                    "newton runs over the reals; use hensel for Q_p".into(),
                ));
            }
            let h = system(sys)?;
            let tol = default_tolerance(g)?;
            let pt0 = parse_point(point, &RealBackend)?;
            let sol = newton_solve(h.polys(), h.unknowns(), &pt0, &tol)?;
            let rep = khovanskii_check(&h, &sol, &RealBackend, &tol)?;
            for u in h.unknowns() {
                r.text(&u.to_string(), RealBackend.format(&sol[u]));
            }
            r.list("residual", &formatted(&RealBackend, &rep.residuals))
                .text("det", RealBackend.format(&rep.det))
                .verdict("verdict", rep.verdict);
        }
        Command::Hensel { sys, point } => {
            let h = system(sys)?;
            let b = padic_backend(g)?;
            let tol = default_tolerance(g)?;
            let pt0 = parse_point(point, &b)?;
            let sol = hensel_solve(h.polys(), h.unknowns(), &pt0, &b)?;
            let rep = khovanskii_check(&h, &sol, &b, &tol)?;
            r.text("backend", b.name());
            for u in h.unknowns() {
                r.text(&u.to_string(), b.format(&sol[u]));
            }
            r.list("residual", &formatted(&b, &rep.residuals))
                .text("det", b.format(&rep.det))
                .verdict("verdict", rep.verdict);
        }
        Command::Star { formula } => {
            let s = star_transform(&parse_formula(&input(formula, g)?)?)?;
            r.int("order", i64::from(s.order))
                .list("equation", &s.equations)
                .list("inequation", &s.inequations);
        }
        Command::DleBuild { demo } => {
            let (inst, _) = instance_source(demo, g, true)?;
            let text = write_instance(&inst);
            match &g.out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| {
                        Error::Format(format!("cannot write {}: {e}", path.display()))
                    })?;
                    r.text("instance", path.display())
                        .int("order", i64::from(inst.h.order()))
                        .int("equations", inst.phi_star_h.equations.len() as i64);
                }
                None if g.json => {
                    r.text("instance", text);
                }
                None => return Ok(Outcome::Raw(text)),
            }
        }
        Command::DleRender { demo } => {
            let (inst, _) = instance_source(demo, g, false)?;
            r.text("rendered", render_instance(&inst))
                .list("core", &instance_cores(&inst));
        }
        Command::DleSolve {
            demo,
            target,
            constants,
            witness,
            magnitude,
        } => {
            let (inst, case) = instance_source(demo, g, false)?;
            let opts = (g.seed, *magnitude);
            r = with_backend!(
                g,
                dle_solve_cmd(&inst, case.as_ref(), target, constants, witness, opts)
            )?;
        }
    }
    Ok(Outcome::Report(r))
}
