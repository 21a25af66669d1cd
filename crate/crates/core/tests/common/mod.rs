//! Independent oracles shared by the property and acceptance suites.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num::{BigInt, Integer, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use expderiv_core::differential::{
    khovanskii_build, partial_derivative, propagate_symbolic, solve_dependent_jet, torsor_residual,
    KhovanskiiSystem,
};
use expderiv_core::numeric::{
    eval, hensel_solve, propagate_numeric, Backend, Jet, Padic, PadicBackend, Point, RealBackend,
    ToleranceSpec,
};
use expderiv_core::random::{random_epoly, EPolyShape};
use expderiv_core::term::{parse_epoly, Term};
use expderiv_core::{EPoly, Error, VarId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ep(s: &str) -> EPoly {
    parse_epoly(s).unwrap()
}

pub fn var(s: &str) -> VarId {
    VarId::parse(s).unwrap()
}

/// The default corpus: height ≤ 2, total degree ≤ 3, variables x, y, z, w.
pub fn corpus(seed: u64, n: usize) -> Vec<EPoly> {
    let mut r = rng(seed);
    let shape = EPolyShape::default();
    (0..n).map(|_| random_epoly(&mut r, &shape)).collect()
}

pub fn corpus_vars() -> Vec<VarId> {
    EPolyShape::default().vars
}

/// Every exponent key has strictly smaller height than its parent.
pub fn well_founded(p: &EPoly) -> bool {
    p.terms().all(|(a, _)| {
        if a.is_zero() {
            return true;
        }
        a.height() < p.height() && a.scalar_const().is_zero() && well_founded(a)
    })
}

// ---------------------------------------------------------------------------
// Truncated Taylor series: a term is evaluated along t ↦ x(t) with
// x^{(k)}(0) given by the value of the jet variable (x, k). Coefficients are
// f^{(k)}(0)/k!, and D is d/dt. A derivative loses its top coefficient,
// which becomes NaN.

pub type Series = Vec<f64>;

fn s_add(a: &Series, b: &Series) -> Series {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn s_mul(a: &Series, b: &Series) -> Series {
    (0..a.len())
        .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
        .collect()
}

fn s_exp(a: &Series) -> Series {
    let mut e = vec![a[0].exp()];
    for k in 1..a.len() {
        let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
        e.push(s / k as f64);
    }
    e
}

fn s_inv(a: &Series) -> Series {
    let mut r = vec![1.0 / a[0]];
    for k in 1..a.len() {
        let s: f64 = (1..=k).map(|j| a[j] * r[k - j]).sum();
        r.push(-s / a[0]);
    }
    r
}

fn s_d(a: &Series) -> Series {
    let n = a.len();
    (0..n)
        .map(|k| {
            if k + 1 < n {
                (k + 1) as f64 * a[k + 1]
            } else {
                f64::NAN
            }
        })
        .collect()
}

/// Taylor coefficients of `t`; `jet(base, k)` is the k-th derivative of the
/// base at 0.
pub fn eval_series(t: &Term, len: usize, jet: &dyn Fn(&str, u32) -> f64) -> Series {
    match t {
        Term::Rat(q) => {
            let mut s = vec![0.0; len];
            s[0] = q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap();
            s
        }
        Term::Var(v) => {
            let mut fact = 1.0;
            (0..len)
                .map(|k| {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    jet(v.base(), v.order() + k as u32) / fact
                })
                .collect()
        }
        Term::Add(a, b) => s_add(&eval_series(a, len, jet), &eval_series(b, len, jet)),
        Term::Mul(a, b) => s_mul(&eval_series(a, len, jet), &eval_series(b, len, jet)),
        Term::Neg(a) => eval_series(a, len, jet).iter().map(|x| -x).collect(),
        Term::Pow(a, n) => {
            let base = eval_series(a, len, jet);
            let mut out = vec![0.0; len];
            out[0] = 1.0;
            for _ in 0..*n {
                out = s_mul(&out, &base);
            }
            out
        }
        Term::Exp(a) => s_exp(&eval_series(a, len, jet)),
        Term::D(a) => s_d(&eval_series(a, len, jet)),
        Term::Inv(a) => s_inv(&eval_series(a, len, jet)),
    }
}

/// True when no `D` in `t` is applied to a subterm containing a literal or
/// a zeroth power, so that δ-normalization cannot drop a derivative.
pub fn d_depth_is_syntactic(t: &Term) -> bool {
    fn inert(t: &Term) -> bool {
        match t {
            Term::Rat(_) | Term::Pow(_, 0) => false,
            Term::Var(_) => true,
            Term::Add(a, b) | Term::Mul(a, b) => inert(a) && inert(b),
            Term::Neg(a) | Term::Pow(a, _) | Term::Exp(a) | Term::D(a) | Term::Inv(a) => inert(a),
        }
    }
    match t {
        Term::Rat(_) | Term::Var(_) => true,
        Term::Add(a, b) | Term::Mul(a, b) => d_depth_is_syntactic(a) && d_depth_is_syntactic(b),
        Term::Neg(a) | Term::Pow(a, _) | Term::Exp(a) | Term::Inv(a) => d_depth_is_syntactic(a),
        Term::D(a) => inert(a),
    }
}

// ---------------------------------------------------------------------------
// Finite differences.

/// `(analytic, central difference)` of `∂_v p` at `pt`, or `None` when the
/// point is not well conditioned: `|f| > 1e4`, `|∂f| < 1e-2·(1 + |f|)`, or a
/// non-finite value.
pub fn gradient_pair(p: &EPoly, v: &VarId, pt: &Point<f64>, h: f64) -> Option<(f64, f64)> {
    let f = eval(p, pt, &RealBackend).ok()?;
    let an = eval(&partial_derivative(p, v), pt, &RealBackend).ok()?;
    if !f.is_finite() || f.abs() > 1e4 || an.abs() < 1e-2 * (1.0 + f.abs()) {
        return None;
    }
    let shifted = |s: f64| {
        let mut q = pt.clone();
        *q.get_mut(v).unwrap() += s;
        eval(p, &q, &RealBackend).ok()
    };
    let fd = (shifted(h)? - shifted(-h)?) / (2.0 * h);
    Some((an, fd))
}

pub fn random_real_point<R: Rng>(r: &mut R, vars: &[VarId]) -> Point<f64> {
    vars.iter()
        .map(|v| (v.clone(), r.gen_range(-1.0..1.0)))
        .collect()
}

// ---------------------------------------------------------------------------
// Propagation catalog: E(y) = c, y² = c, (E(y) − z, z − y − c).

pub struct PropCase {
    pub name: &'static str,
    pub system: KhovanskiiSystem,
}

pub fn propagation_catalog() -> Vec<PropCase> {
    let build = |fs: &[&str], us: &[&str]| {
        khovanskii_build(
            fs.iter().map(|f| ep(f)).collect(),
            us.iter().map(|u| var(u)).collect(),
            Some(vec![var("c")]),
        )
        .unwrap()
    };
    vec![
        PropCase {
            name: "E(y)=c",
            system: build(&["E(y) - c"], &["y"]),
        },
        PropCase {
            name: "y^2=c",
            system: build(&["y^2 - c"], &["y"]),
        },
        PropCase {
            name: "E(y)-z, z-y-c",
            system: build(&["E(y) - z", "z - y - c"], &["y", "z"]),
        },
    ]
}

/// A real solution of catalog entry `idx` and a random parameter jet to
/// order 3.
pub fn real_prop_point<R: Rng>(r: &mut R, idx: usize) -> (Point<f64>, Jet<f64>) {
    let mut pt = Point::new();
    match idx {
        0 => {
            let c: f64 = r.gen_range(0.5..3.0);
            pt.insert(var("c"), c);
            pt.insert(var("y"), c.ln());
        }
        1 => {
            let c: f64 = r.gen_range(0.5..3.0);
            pt.insert(var("c"), c);
            pt.insert(var("y"), c.sqrt());
        }
        _ => {
            let y: f64 = r.gen_range(0.3..1.5);
            pt.insert(var("y"), y);
            pt.insert(var("z"), y.exp());
            pt.insert(var("c"), y.exp() - y);
        }
    }
    let mut jet = Jet::new(3);
    for k in 1..=3 {
        jet.insert(VarId::with_order("c", k), r.gen_range(-1.0..1.0));
    }
    (pt, jet)
}

/// A p-adic solution of catalog entry `idx` and a random integral
/// parameter jet to order 3.
pub fn padic_prop_point<R: Rng>(
    r: &mut R,
    idx: usize,
    b: &PadicBackend,
) -> (Point<Padic>, Jet<Padic>) {
    let p = b.prime() as i64;
    let step = if p == 2 { 4 } else { p };
    let mut pt = Point::new();
    match idx {
        0 => {
            let y = b.int(step * r.gen_range(1..50));
            pt.insert(var("c"), y.exp().unwrap());
            pt.insert(var("y"), y);
        }
        1 => {
            let y = b.int(p * r.gen_range(0..50) + r.gen_range(1..p));
            pt.insert(var("c"), y.mul(&y));
            pt.insert(var("y"), y);
        }
        _ => {
            let y = b.int(step * r.gen_range(1..50));
            let z = y.exp().unwrap();
            pt.insert(var("c"), z.sub(&y));
            pt.insert(var("z"), z);
            pt.insert(var("y"), y);
        }
    }
    let mut jet = Jet::new(3);
    for k in 1..=3 {
        jet.insert(VarId::with_order("c", k), b.int(r.gen_range(-100..100)));
    }
    (pt, jet)
}

/// `(successor, symbolic, numeric)` for every `δ^k` unknown, `k ≤ levels`,
/// both evaluated in the same backend.
pub fn propagation_pairs<B: Backend>(
    sys: &KhovanskiiSystem,
    pt: &Point<B::Scalar>,
    jet: &Jet<B::Scalar>,
    levels: u32,
    backend: &B,
    tol: &ToleranceSpec,
) -> Vec<(VarId, B::Scalar, B::Scalar)> {
    let symbolic = propagate_symbolic(sys, levels as usize).unwrap();
    let numeric = propagate_numeric(sys, pt, jet, levels, backend, tol).unwrap();
    let mut binding = pt.clone();
    binding.extend(jet.values().iter().map(|(k, v)| (k.clone(), v.clone())));
    let mut out = Vec::new();
    for (k, level) in symbolic.iter().enumerate() {
        for (u, q) in sys.unknowns().iter().zip(level) {
            let num = eval(&q.num, &binding, backend).unwrap();
            let den = eval(&q.den, &binding, backend).unwrap();
            let s = backend.mul(&num, &backend.inv(&den).unwrap());
            let key = u.shifted(k as u32 + 1);
            out.push((key.clone(), s, numeric.get(&key).unwrap().clone()));
        }
    }
    out
}

/// Agreement of `propagate_numeric` at the backend precision `N` with the
/// symbolic functions evaluated at working precision `4N` on the same
/// inputs. Per unknown successor returns `(v(s − n) − v(n), sound)` where
/// `sound` says the error is within the absolute precision `n` claims.
pub fn padic_propagation_agreement(
    sys: &KhovanskiiSystem,
    pt: &Point<Padic>,
    jet: &Jet<Padic>,
    levels: u32,
    backend: &PadicBackend,
) -> Vec<(VarId, i64, bool)> {
    let n_prec = backend.precision();
    let tol = ToleranceSpec::for_precision(n_prec);
    let hi = backend.with_precision(4 * n_prec);
    let symbolic = propagate_symbolic(sys, levels as usize).unwrap();
    let numeric = propagate_numeric(sys, pt, jet, levels, backend, &tol).unwrap();
    let binding: Point<Padic> = pt
        .iter()
        .chain(jet.values())
        .map(|(k, v)| (k.clone(), v.with_precision(4 * n_prec)))
        .collect();
    let mut out = Vec::new();
    for (k, level) in symbolic.iter().enumerate() {
        for (u, q) in sys.unknowns().iter().zip(level) {
            let num = eval(&q.num, &binding, &hi).unwrap();
            let den = eval(&q.den, &binding, &hi).unwrap();
            let s = hi.mul(&num, &hi.inv(&den).unwrap());
            let key = u.shifted(k as u32 + 1);
            let n = numeric.get(&key).unwrap();
            let err = s.sub(&n.with_precision(4 * n_prec)).valuation();
            let rel = if n.is_zero() {
                err
            } else {
                err - n.valuation()
            };
            out.push((key, rel, err >= n.absolute_precision()));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Hensel uniqueness by enumeration.

fn int_eval(coeffs: &[i64], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + BigInt::from(*c))
}

/// `Σ coeffs[i]·x^i` as an E-polynomial in `x`.
pub fn int_poly(coeffs: &[i64]) -> EPoly {
    let x = ep("x");
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| x.pow(i as u32).scale(&BigInt::from(*c).into()))
        .sum()
}

/// Outcome of one Hensel uniqueness probe.
pub struct HenselProbe {
    pub seeds_tried: usize,
    pub lifts: usize,
}

/// For every simple root `s` of `f` mod `p`, lifts it with `hensel_solve`
/// and checks that the lift is the only root of `f` mod `p³` above `s`, and
/// that its residual has valuation at least `n`. Returns an error message
/// on the first violation.
pub fn hensel_uniqueness(coeffs: &[i64], p: u64, n: u32) -> Result<HenselProbe, String> {
    let b = PadicBackend::new(p, n).unwrap();
    let f = int_poly(coeffs);
    let df: Vec<i64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| i as i64 * c)
        .collect();
    let pb = BigInt::from(p);
    let p3 = pb.pow(3);
    let mut probe = HenselProbe {
        seeds_tried: 0,
        lifts: 0,
    };
    for s in 0..p {
        let sb = BigInt::from(s);
        if !int_eval(coeffs, &sb).mod_floor(&pb).is_zero()
            || int_eval(&df, &sb).mod_floor(&pb).is_zero()
        {
            continue;
        }
        probe.seeds_tried += 1;
        let x = var("x");
        let pt0: Point<Padic> = [(x.clone(), b.int(s as i64))].into_iter().collect();
        let lift = hensel_solve(std::slice::from_ref(&f), std::slice::from_ref(&x), &pt0, &b)
            .map_err(|e| format!("p={p} f={coeffs:?} seed {s}: {e}"))?;
        let root = &lift[&x];
        let res = eval(&f, &lift, &b).unwrap();
        if res.valuation() < n as i64 {
            return Err(format!(
                "p={p} f={coeffs:?}: residual valuation {}",
                res.valuation()
            ));
        }
        let r_mod = root.residue().unwrap().mod_floor(&p3);
        let above: BTreeSet<BigInt> = (0..p * p * p)
            .map(BigInt::from)
            .filter(|r| r.mod_floor(&pb) == sb && int_eval(coeffs, r).mod_floor(&p3).is_zero())
            .collect();
        if above.len() != 1 || !above.contains(&r_mod) {
            return Err(format!(
                "p={p} f={coeffs:?} seed {s}: roots mod p^3 above seed {above:?}, lift {r_mod}"
            ));
        }
        probe.lifts += 1;
    }
    Ok(probe)
}

/// A random polynomial of degree 2 or 3 with small integer coefficients.
pub fn random_int_poly<R: Rng>(r: &mut R) -> Vec<i64> {
    let deg = r.gen_range(2..=3);
    let mut c: Vec<i64> = (0..deg).map(|_| r.gen_range(-20..=20)).collect();
    c.push(1);
    c
}

// ---------------------------------------------------------------------------
// Dependent-jet systems.

pub struct TorsorCase {
    pub generators: Vec<EPoly>,
    pub free: Vec<VarId>,
    pub dependent: Vec<VarId>,
    pub a: Point<f64>,
    pub free_tangents: Point<f64>,
    pub parameter_jet: Jet<f64>,
}

impl TorsorCase {
    /// Largest absolute torsor residual after solving for the dependent
    /// tangents.
    pub fn max_residual(&self) -> Result<f64, Error> {
        let tol = ToleranceSpec::default();
        let dep = solve_dependent_jet(
            &self.generators,
            &self.free,
            &self.dependent,
            &self.a,
            &self.free_tangents,
            &self.parameter_jet,
            &RealBackend,
            &tol,
        )?;
        let mut b = self.free_tangents.clone();
        b.extend(dep);
        let unknowns: Vec<VarId> = self.free.iter().chain(&self.dependent).cloned().collect();
        let report = torsor_residual(
            &self.generators,
            &unknowns,
            &self.a,
            &b,
            &self.parameter_jet,
            &RealBackend,
            &tol,
        )?;
        Ok(report.residuals.iter().fold(0.0, |m, r| m.max(r.abs())))
    }
}

fn pts(pairs: &[(&str, f64)]) -> Point<f64> {
    pairs.iter().map(|(k, v)| (var(k), *v)).collect()
}

/// The three catalogued dependent-jet examples.
pub fn torsor_catalog() -> Vec<TorsorCase> {
    let case = |g: &str, a: &[(&str, f64)], b1: f64| TorsorCase {
        generators: vec![ep(g)],
        free: vec![var("x1")],
        dependent: vec![var("x2")],
        a: pts(a),
        free_tangents: pts(&[("x1", b1)]),
        parameter_jet: Jet::new(0),
    };
    vec![
        case("x2 - E(x1)", &[("x1", 0.0), ("x2", 1.0)], 3.0),
        case("x2 - x1^2", &[("x1", 2.0), ("x2", 4.0)], 1.0),
        case("x2 - E(x1)", &[("x1", 0.0), ("x2", 1.0)], 0.0),
    ]
}

/// A random system of two generators in the free unknown `x`, dependent
/// unknowns `y, z` and parameter `c`, with a well-conditioned dependent
/// block (|det| ≥ 0.1) at a random point.
pub fn random_torsor_case<R: Rng>(r: &mut R) -> TorsorCase {
    let shape = EPolyShape {
        vars: ["x", "y", "z", "c"].iter().map(|v| var(v)).collect(),
        max_height: 1,
        max_degree: 2,
        max_terms: 2,
        max_coeff: 3,
    };
    let (x, y, z, c) = (var("x"), var("y"), var("z"), var("c"));
    loop {
        let generators = vec![random_epoly(r, &shape), random_epoly(r, &shape)];
        let a = random_real_point(r, &shape.vars);
        let entry =
            |g: &EPoly, v: &VarId| eval(&partial_derivative(g, v), &a, &RealBackend).unwrap();
        let det = entry(&generators[0], &y) * entry(&generators[1], &z)
            - entry(&generators[0], &z) * entry(&generators[1], &y);
        if det.abs() < 0.1 || det.abs() > 1e3 {
            continue;
        }
        let mut parameter_jet = Jet::new(1);
        parameter_jet.insert(c.succ(), r.gen_range(-1.0..1.0));
        return TorsorCase {
            generators,
            free: vec![x.clone()],
            dependent: vec![y, z],
            free_tangents: pts(&[("x", r.gen_range(-1.0..1.0))]),
            a,
            parameter_jet,
        };
    }
}
