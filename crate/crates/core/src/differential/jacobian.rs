use std::collections::HashMap;

use super::partial::partial_derivative;
use crate::epoly::{EPoly, VarId};
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<EPoly>>;

/// `J[i][j] = ∂_{vars[j]} f_i`.
pub fn jacobian(fs: &[EPoly], vars: &[VarId]) -> Matrix {
    fs.iter()
        .map(|f| vars.iter().map(|v| partial_derivative(f, v)).collect())
        .collect()
}

pub fn jacobian_det(fs: &[EPoly], vars: &[VarId]) -> Result<EPoly> {
    if fs.len() != vars.len() {
        return Err(Error::Shape(format!(
            "Jacobian of {} functions in {} variables is not square",
            fs.len(),
            vars.len()
        )));
    }
    Ok(det(&jacobian(fs, vars)))
}

/// Exact determinant by Laplace expansion along rows, memoized on the set of
/// columns already used. The empty matrix has determinant 1.
pub fn det(m: &Matrix) -> EPoly {
    let n = m.len();
    assert!(
        n < 64 && m.iter().all(|r| r.len() == n),
        "square matrix expected"
    );
    let mut memo = HashMap::new();
    det_rec(m, 0, 0, &mut memo)
}

fn det_rec(m: &Matrix, row: usize, used: u64, memo: &mut HashMap<u64, EPoly>) -> EPoly {
    let n = m.len();
    if row == n {
        return EPoly::one();
    }
    if let Some(d) = memo.get(&used) {
        return d.clone();
    }
    let mut acc = EPoly::zero();
    let mut sign_pos = true;
    for col in 0..n {
        if used & (1 << col) != 0 {
            continue;
        }
        if !m[row][col].is_zero() {
            let minor = det_rec(m, row + 1, used | (1 << col), memo);
            let term = &m[row][col] * &minor;
            acc = if sign_pos { &acc + &term } else { &acc - &term };
        }
        sign_pos = !sign_pos;
    }
    memo.insert(used, acc.clone());
    acc
}

/// Classical adjugate: `adj[i][j] = (-1)^{i+j} · det(m without row j, column i)`.
pub fn adjugate(m: &Matrix) -> Matrix {
    let n = m.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Matrix = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| {
                            (0..n)
                                .filter(|&c| c != i)
                                .map(|c| m[r][c].clone())
                                .collect()
                        })
                        .collect();
                    let d = det(&minor);
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_epoly;

    fn ep(s: &str) -> EPoly {
        parse_epoly(s).unwrap()
    }

    fn vars(names: &[&str]) -> Vec<VarId> {
        names.iter().map(|n| VarId::new(n)).collect()
    }

    #[test]
    fn examples() {
        let fs = [ep("E(x) - y"), ep("y - 1")];
        let j = jacobian(&fs, &vars(&["x", "y"]));
        assert_eq!(j, vec![vec![ep("E(x)"), ep("-1")], vec![ep("0"), ep("1")]]);
        assert_eq!(jacobian_det(&fs, &vars(&["x", "y"])).unwrap(), ep("E(x)"));
        assert_eq!(jacobian_det(&[ep("x")], &vars(&["x"])).unwrap(), ep("1"));
        let ids: Vec<EPoly> = ["a", "b", "c"].iter().map(|n| EPoly::named(n)).collect();
        assert_eq!(
            jacobian_det(&ids, &vars(&["a", "b", "c"])).unwrap(),
            ep("1")
        );
        assert!(matches!(
            jacobian_det(&fs, &vars(&["x"])),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn adjugate_times_matrix_is_det_identity() {
        let m: Matrix = vec![
            vec![ep("x"), ep("E(y)"), ep("1")],
            vec![ep("2"), ep("y"), ep("x*y")],
            vec![ep("E(x)"), ep("0"), ep("3")],
        ];
        let adj = adjugate(&m);
        let d = det(&m);
        for i in 0..3 {
            for k in 0..3 {
                let s: EPoly = (0..3).map(|j| &adj[i][j] * &m[j][k]).sum();
                assert_eq!(s, if i == k { d.clone() } else { EPoly::zero() });
            }
        }
    }
}
