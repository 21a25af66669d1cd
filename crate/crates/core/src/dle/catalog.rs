//! Five small instances with consistent real targets, used by tests,
//! benches and the command-line demo.

use super::build::DLEInstance;
use super::formula::KhovanskiiFormula;
use crate::differential::khovanskii_build;
use crate::epoly::VarId;
use crate::numeric::{Jet, Point, ToleranceSpec};
use crate::term::{parse_epoly, parse_formula};

#[derive(Clone, Debug)]
pub struct DemoCase {
    pub name: &'static str,
    pub instance: DLEInstance,
    pub target: Jet<f64>,
    pub constants: Jet<f64>,
    pub witness_seed: Point<f64>,
}

/// Tolerances shared by the catalog.
pub fn demo_tolerance() -> ToleranceSpec {
    ToleranceSpec {
        eps_res: 1e-9,
        eps_reg: 1e-9,
        radius: 1e-2,
        ..ToleranceSpec::default()
    }
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn system(
    fs: &[&str],
    unknowns: &[&str],
    params: &[&str],
) -> crate::differential::KhovanskiiSystem {
    let parse_vars = |vs: &[&str]| {
        vs.iter()
            .map(|v| VarId::parse(v).expect("catalog name"))
            .collect()
    };
    khovanskii_build(
        fs.iter()
            .map(|f| parse_epoly(f).expect("catalog polynomial"))
            .collect(),
        parse_vars(unknowns),
        Some(parse_vars(params)),
    )
    .expect("catalog system")
}

fn jet(pairs: &[(&str, u32, f64)]) -> Jet<f64> {
    let mut j = Jet::new(0);
    for (b, k, x) in pairs {
        j.insert(VarId::with_order(b, *k), *x);
    }
    j
}

fn case(
    name: &'static str,
    phi: &str,
    h: KhovanskiiFormula,
    target: Jet<f64>,
    constants: Jet<f64>,
    witness_seed: &[(&str, f64)],
) -> DemoCase {
    let instance = DLEInstance::build(
        parse_formula(phi).expect("catalog formula"),
        h,
        demo_tolerance(),
    )
    .expect("catalog instance");
    DemoCase {
        name,
        instance,
        target,
        constants,
        witness_seed: witness_seed
            .iter()
            .map(|(k, v)| (VarId::new(k), *v))
            .collect(),
    }
}

pub fn demo_catalog() -> Vec<DemoCase> {
    let ln2 = 2f64.ln();
    let e_half = 0.5f64.exp();
    vec![
        case(
            "linear",
            "D(x) = x",
            KhovanskiiFormula::new(1, names(&["x"]), vec![1], vec![], vec![]).expect("H"),
            jet(&[("x", 0, 1.0), ("x", 1, 1.0)]),
            Jet::new(0),
            &[],
        ),
        case(
            "log-two",
            "D(x) = 0",
            KhovanskiiFormula::new(
                1,
                names(&["x"]),
                vec![0],
                vec![],
                vec![system(&["E(x) - 2"], &["x"], &[])],
            )
            .expect("H"),
            jet(&[("x", 0, ln2), ("x", 1, 0.0)]),
            Jet::new(0),
            &[],
        ),
        case(
            "exp-graph",
            "D(y) = c*E(x)*D(x)",
            KhovanskiiFormula::new(
                1,
                names(&["x", "y"]),
                vec![1],
                names(&["c"]),
                vec![system(&["y - c*E(x)"], &["y"], &["x", "c"])],
            )
            .expect("H"),
            jet(&[
                ("x", 0, 0.5),
                ("x", 1, 2.0),
                ("y", 0, e_half),
                ("y", 1, 2.0 * e_half),
            ]),
            jet(&[("c", 0, 1.0), ("c", 1, 0.0)]),
            &[],
        ),
        case(
            "log-square",
            "D(x) = 1",
            KhovanskiiFormula::new(
                1,
                names(&["x", "y"]),
                vec![1],
                vec![],
                vec![system(&["E(z) - x", "y - z^2"], &["y", "z"], &["x"])],
            )
            .expect("H"),
            jet(&[
                ("x", 0, 2.0),
                ("x", 1, 1.0),
                ("y", 0, ln2 * ln2),
                ("y", 1, ln2),
            ]),
            Jet::new(0),
            &[("z", 0.7)],
        ),
        case(
            "oscillator",
            "D(D(x)) + x = 0",
            KhovanskiiFormula::new(
                2,
                names(&["x", "y"]),
                vec![1, 1],
                vec![],
                vec![
                    system(&["y - E(x)"], &["y"], &["x"]),
                    system(&["y__1 - E(x)*x__1"], &["y__1"], &["x", "x__1"]),
                ],
            )
            .expect("H"),
            jet(&[
                ("x", 0, 0.5),
                ("x", 1, 0.2),
                ("x", 2, -0.5),
                ("y", 0, e_half),
                ("y", 1, 0.2 * e_half),
                ("y", 2, (0.04 - 0.5) * e_half),
            ]),
            Jet::new(0),
            &[],
        ),
    ]
}
