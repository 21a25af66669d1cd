//! One check per acceptance criterion, each printing a PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.

mod common;

use std::time::Instant;

use common::*;
use num::{BigInt, Integer};
use rand::Rng;

use expderiv_core::differential::partial_derivative;
use expderiv_core::dle::catalog::demo_catalog;
use expderiv_core::dle::{
    instance_cores, jet_search, parse_rendered_cores, read_instance, render_instance,
    write_instance, SearchOptions,
};
use expderiv_core::epoly::{ord, ord_reduce, OrdinalCNF};
use expderiv_core::numeric::{
    eval, hensel_solve, newton_solve, Padic, PadicBackend, Point, RealBackend, ToleranceSpec,
};
use expderiv_core::random::{random_term, TermShape};
use expderiv_core::term::{
    delta_normalize, parse_formula, parse_term, star_transform, Atom, Formula, Relation,
};
use expderiv_core::EPoly;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Exponent form of a corpus element: the same element minus its constant.
fn exponent(p: &EPoly) -> EPoly {
    p - &EPoly::constant(p.scalar_const())
}

// `a - a` is the additive-inverse law under test.
#[allow(clippy::eq_op)]
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let c = corpus(1, 500);
    let zero = EPoly::zero();
    let one = EPoly::one();
    ensure(zero.exp().map_err(|e| e.to_string())? == one, || {
        "E(0) != 1".into()
    })?;
    for i in 0..c.len() {
        let (a, b, d) = (&c[i], &c[(i + 1) % c.len()], &c[(i + 2) % c.len()]);
        let fail = |law: &str| format!("{law} fails on corpus element {i}: a = {a}");
        ensure(&(a + b) + d == a + &(b + d), || {
            fail("additive associativity")
        })?;
        ensure(a + b == b + a, || fail("additive commutativity"))?;
        ensure(a + &zero == *a && (a - a).is_zero(), || {
            fail("additive identity/inverse")
        })?;
        ensure(&(a * b) * d == a * &(b * d), || {
            fail("multiplicative associativity")
        })?;
        ensure(a * b == b * a, || fail("multiplicative commutativity"))?;
        ensure(a * &one == *a, || fail("multiplicative identity"))?;
        ensure(&(a + b) * d == &(a * d) + &(b * d), || {
            fail("distributivity")
        })?;
        let (ea, eb) = (exponent(a), exponent(b));
        let lhs = (&ea + &eb).exp().map_err(|e| e.to_string())?;
        let rhs = &ea.exp().map_err(|e| e.to_string())? * &eb.exp().map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || fail("E(a+b) = E(a)E(b)"))?;
        ensure(well_founded(a), || fail("well-foundedness"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("500 polys, exact, {secs:.2} s"))
}

fn criterion_2() -> Outcome {
    let c = corpus(1, 500);
    let vars = corpus_vars();
    let mut checks = 0;
    for i in 0..c.len() {
        let (a, b) = (&c[i], &c[(i + 1) % c.len()]);
        let u = &vars[i % vars.len()];
        let v = &vars[(i / vars.len() + 1) % vars.len()];
        let d = |p: &EPoly| partial_derivative(p, u);
        let fail = |law: &str| format!("{law} fails on element {i} w.r.t. {u}: a = {a}");
        ensure(d(&(a + b)) == &d(a) + &d(b), || fail("additivity"))?;
        ensure(d(&(a * b)) == &(&d(a) * b) + &(a * &d(b)), || {
            fail("Leibniz")
        })?;
        let ea = exponent(a);
        let e = ea.exp().map_err(|e| e.to_string())?;
        ensure(d(&e) == &d(&ea) * &e, || fail("dE(a) = da E(a)"))?;
        ensure(
            partial_derivative(&d(a), v) == d(&partial_derivative(a, v)),
            || fail("mixed partials"),
        )?;
        checks += 4;
    }
    Ok(format!("{checks} identities on 500 polys, exact"))
}

fn criterion_3() -> Outcome {
    let vars = corpus_vars();
    let mut r = rng(3);
    let (mut accepted, mut tried, mut worst) = (0, 0, 0.0f64);
    for p in corpus(3, 5000) {
        if accepted == 200 {
            break;
        }
        tried += 1;
        let v = &vars[r.gen_range(0..vars.len())];
        let pt = random_real_point(&mut r, &vars);
        if let Some((an, fd)) = gradient_pair(&p, v, &pt, 1e-6) {
            accepted += 1;
            let rel = (an - fd).abs() / an.abs();
            worst = worst.max(rel);
            ensure(rel <= 1e-5, || {
                format!("∂_{v} of {p}: analytic {an}, fd {fd}")
            })?;
        }
    }
    ensure(accepted == 200, || {
        format!("only {accepted} well-conditioned pairs")
    })?;
    Ok(format!(
        "200 pairs ({tried} drawn), max rel err {worst:.2e}"
    ))
}

fn criterion_4() -> Outcome {
    let examples = [
        ("0", vec![]),
        ("x^2 + 1", vec![3]),
        ("x + E(x) + E(E(x))", vec![2, 1, 1]),
    ];
    for (src, want) in examples {
        let got = ord(&ep(src));
        ensure(got == OrdinalCNF::from_coeffs(want.clone()), || {
            format!("ord({src}) = {got}")
        })?;
    }
    let mut n = 0;
    for p in corpus(4, 1000) {
        if n == 100 {
            break;
        }
        let p = &p - &EPoly::from_poly(p.poly_part());
        if p.is_zero() {
            continue;
        }
        n += 1;
        let (q, reduced) = ord_reduce(&p).map_err(|e| e.to_string())?;
        ensure(reduced == &q.exp().map_err(|e| e.to_string())? * &p, || {
            format!("ord_reduce({p}) product")
        })?;
        ensure(ord(&reduced) < ord(&p), || {
            format!("ord_reduce({p}): {} -> {}", ord(&p), ord(&reduced))
        })?;
    }
    ensure(n == 100, || format!("only {n} admissible inputs"))?;
    Ok("3 examples exact, 100/100 strict decreases".into())
}

fn criterion_5() -> Outcome {
    let tol = ToleranceSpec::default();
    let mut r = rng(5);
    let mut worst_real = 0.0f64;
    let mut worst_padic = i64::MAX;
    for (idx, case) in propagation_catalog().iter().enumerate() {
        for _ in 0..20 {
            let (pt, jet) = real_prop_point(&mut r, idx);
            for (k, s, n) in propagation_pairs(&case.system, &pt, &jet, 3, &RealBackend, &tol) {
                let err = (s - n).abs() / (1.0 + n.abs());
                worst_real = worst_real.max(err);
                ensure(err <= 1e-8, || {
                    format!("{} {k}: symbolic {s}, numeric {n}", case.name)
                })?;
            }
            let v = |name: &str| {
                jet.get(&var(name))
                    .copied()
                    .unwrap_or_else(|| pt[&var(name)])
            };
            let got = propagation_pairs(&case.system, &pt, &jet, 2, &RealBackend, &tol);
            let (c, c1, c2) = (v("c"), v("c__1"), v("c__2"));
            let closed: Vec<f64> = match idx {
                0 => vec![c1 / c, c2 / c - c1 * c1 / (c * c)],
                1 => vec![c1 / (2.0 * c.sqrt())],
                _ => vec![],
            };
            for (want, (k, _, n)) in closed.iter().zip(&got) {
                ensure((want - n).abs() <= 1e-8 * (1.0 + want.abs()), || {
                    format!("{} {k}: closed form {want}, numeric {n}", case.name)
                })?;
            }
            for p in [3u64, 5, 7] {
                let b = PadicBackend::new(p, 12).unwrap();
                let (pt, jet) = padic_prop_point(&mut r, idx, &b);
                for (k, rel, sound) in padic_propagation_agreement(&case.system, &pt, &jet, 3, &b) {
                    worst_padic = worst_padic.min(rel);
                    ensure(rel >= 8 && sound, || {
                        format!(
                            "{} over Q_{p} {k}: relative agreement {rel}, sound {sound}",
                            case.name
                        )
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "real max err {worst_real:.1e}; p-adic min relative agreement {worst_padic} (N=12)"
    ))
}

fn criterion_6() -> Outcome {
    let x = var("x");
    for n in [8u32, 16] {
        let b = PadicBackend::new(2, n).unwrap();
        let f = ep("x^2 - 17");
        let pt0: Point<Padic> = [(x.clone(), b.int(1))].into_iter().collect();
        let lift = hensel_solve(std::slice::from_ref(&f), std::slice::from_ref(&x), &pt0, &b)
            .map_err(|e| e.to_string())?;
        let res = eval(&f, &lift, &b).map_err(|e| e.to_string())?;
        ensure(res.valuation() >= n as i64, || {
            format!("N={n}: residual valuation {}", res.valuation())
        })?;
        let four = BigInt::from(4);
        ensure(
            lift[&x].residue().unwrap().mod_floor(&four) == BigInt::from(1),
            || format!("N={n}: lift not ≡ 1 mod 4"),
        )?;
    }
    let y = var("y");
    let f = ep("E(y) - 2");
    let tol = ToleranceSpec {
        eps_res: 1e-12,
        ..ToleranceSpec::default()
    };
    let sol = newton_solve(
        std::slice::from_ref(&f),
        std::slice::from_ref(&y),
        &[(y.clone(), 0.7)].into_iter().collect(),
        &tol,
    )
    .map_err(|e| e.to_string())?;
    let res = eval(&f, &sol, &RealBackend).map_err(|e| e.to_string())?;
    ensure(res.abs() <= 1e-10, || format!("E(y)=2 residual {res}"))?;

    let mut r = rng(6);
    let mut summary = Vec::new();
    for p in [2u64, 5, 7] {
        let mut lifts = 0;
        let fixed: Vec<Vec<i64>> = vec![
            vec![-2, 1, 1],
            vec![1, 0, 1],
            vec![-2, 0, 1],
            vec![-17, 0, 1],
        ];
        let randoms: Vec<Vec<i64>> = (0..40).map(|_| random_int_poly(&mut r)).collect();
        for coeffs in fixed.iter().chain(&randoms) {
            lifts += hensel_uniqueness(coeffs, p, 10)?.lifts;
        }
        ensure(lifts >= 10, || {
            format!("p={p}: only {lifts} simple roots probed")
        })?;
        summary.push(format!("p={p}: {lifts} lifts unique"));
    }
    Ok(format!(
        "Q_2 lifts N=8,16 ok; E(y)=2 |res|={:.1e}; {}",
        res.abs(),
        summary.join(", ")
    ))
}

fn criterion_7() -> Outcome {
    let n = 12u32;
    for p in [2u64, 3, 5, 7] {
        let mut r = rng(7 + p);
        let step = if p == 2 { 4 } else { p as i64 };
        let modulus = BigInt::from(p).pow(n - 2);
        let range = (p as i64).pow(n - 1);
        for _ in 0..200 {
            let a = Padic::from_integer(step * r.gen_range(0..range), p, n);
            let b = Padic::from_integer(step * r.gen_range(0..range), p, n);
            let lhs = a.add(&b).exp().map_err(|e| e.to_string())?;
            let rhs = a
                .exp()
                .map_err(|e| e.to_string())?
                .mul(&b.exp().map_err(|e| e.to_string())?);
            let (l, rr) = (
                lhs.residue().unwrap().mod_floor(&modulus),
                rhs.residue().unwrap().mod_floor(&modulus),
            );
            ensure(l == rr, || {
                format!("p={p}: exp(a+b) ≢ exp(a)exp(b) mod p^{}: {a} {b}", n - 2)
            })?;
        }
    }
    Ok("4 × 200 pairs exact mod p^10".into())
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    for (i, case) in torsor_catalog().iter().enumerate() {
        let m = case
            .max_residual()
            .map_err(|e| format!("catalog {i}: {e}"))?;
        worst = worst.max(m);
        ensure(m <= 1e-9, || format!("catalog {i}: residual {m}"))?;
    }
    let mut r = rng(8);
    for i in 0..50 {
        let case = random_torsor_case(&mut r);
        let m = case
            .max_residual()
            .map_err(|e| format!("random {i}: {e}"))?;
        worst = worst.max(m);
        ensure(m <= 1e-9, || format!("random system {i}: residual {m}"))?;
    }
    Ok(format!(
        "3 catalogued + 50 random, max residual {worst:.1e}"
    ))
}

fn criterion_9() -> Outcome {
    for case in demo_catalog() {
        let file = write_instance(&case.instance);
        let inst = read_instance(&file).map_err(|e| format!("{}: {e}", case.name))?;
        ensure(inst == case.instance, || {
            format!("{}: instance file round trip", case.name)
        })?;
        let mut opts = SearchOptions::new(2024, 1e-4);
        opts.witness_seed = case.witness_seed.clone();
        let sol = jet_search(&inst, &case.target, &case.constants, &RealBackend, &opts)
            .map_err(|e| format!("{}: {e}", case.name))?;
        let worst = sol.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        ensure(worst <= 1e-8, || format!("{}: residual {worst}", case.name))?;
        ensure(sol.within_neighborhood, || {
            format!("{}: outside the neighborhood", case.name)
        })?;
        ensure(sol.success, || {
            format!("{}: search reported failure", case.name)
        })?;

        let text = render_instance(&inst);
        let parsed = parse_rendered_cores(&text).map_err(|e| format!("{}: {e}", case.name))?;
        let cores = instance_cores(&inst);
        ensure(parsed.len() == cores.len(), || {
            format!("{}: core count", case.name)
        })?;
        for (p, c) in parsed.iter().zip(&cores) {
            ensure(p.to_string() == *c, || {
                format!("{}: rendered core `{c}` reads back as `{p}`", case.name)
            })?;
            ensure(parse_formula(c).ok().as_ref() == Some(p), || {
                format!("{}: core `{c}`", case.name)
            })?;
        }
    }
    Ok("5 instances solved within tolerance and neighborhood; cores round-trip".into())
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let shape = TermShape::default();
    for i in 0..1000 {
        let t = random_term(&mut r, &shape);
        let back = parse_term(&t.to_string()).map_err(|e| format!("term {i} `{t}`: {e}"))?;
        ensure(back == t, || {
            format!("term {i} `{t}` reads back as `{back}`")
        })?;
    }
    let shape = TermShape {
        max_var_order: 2,
        exp_guard: true,
        ..TermShape::default()
    };
    let (mut starred, mut syntactic) = (0, 0);
    for i in 0..1000 {
        let atoms = (0..r.gen_range(1..=3))
            .map(|_| Atom {
                term: random_term(&mut r, &shape),
                rel: if r.gen_bool(0.7) {
                    Relation::Eq
                } else {
                    Relation::Ne
                },
            })
            .collect();
        let phi = Formula { atoms };
        let back = parse_formula(&phi.to_string()).map_err(|e| format!("formula {i}: {e}"))?;
        ensure(back == phi, || format!("formula {i} `{phi}` round trip"))?;
        // Domain errors come from literals such as inv(0) or E of a term with
        // a nonzero constant after simplification.
        let Ok(star) = star_transform(&phi) else {
            continue;
        };
        starred += 1;
        let depth = phi
            .atoms
            .iter()
            .map(|a| delta_normalize(&a.term).map(|t| t.d_depth()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?
            .into_iter()
            .max()
            .unwrap_or(0);
        ensure(star.order == depth, || {
            format!("formula {i} `{phi}`: order {} vs depth {depth}", star.order)
        })?;
        if phi.atoms.iter().all(|a| d_depth_is_syntactic(&a.term)) {
            syntactic += 1;
            ensure(star.order == phi.d_depth(), || {
                format!("formula {i} `{phi}`: order {}", star.order)
            })?;
        }
    }
    ensure(starred >= 500, || {
        format!("only {starred} formulas were star-transformable")
    })?;
    Ok(format!(
        "1000 terms + 1000 formulas round-trip; order = D-depth on {starred} starred ({syntactic} syntactic)"
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("E-ring axioms", criterion_1),
        ("E-derivation laws", criterion_2),
        ("gradient vs finite differences", criterion_3),
        ("ord and ord_reduce", criterion_4),
        ("propagation oracle", criterion_5),
        ("Hensel/Newton", criterion_6),
        ("E_p homomorphism", criterion_7),
        ("dependent-jet torsor residuals", criterion_8),
        ("(DL)_E round trip", criterion_9),
        ("parser round trip and star order", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} [{secs:.2} s]",
                i + 1
            ),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2} s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
