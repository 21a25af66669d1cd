//! Dense linear algebra over a [`Backend`] field.

use super::backend::Backend;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Pivot<S> {
    pub row: usize,
    pub col: usize,
    pub value: S,
}

/// Result of full-pivot Gauss–Jordan elimination.
#[derive(Clone, Debug)]
pub struct Elimination<S> {
    /// Reduced matrix; each pivot row has zeros in the other pivot columns.
    pub rows: Vec<Vec<S>>,
    pub rhs: Vec<S>,
    pub pivots: Vec<Pivot<S>>,
}

fn eliminate<B: Backend>(
    b: &B,
    rows: &[Vec<B::Scalar>],
    rhs: Option<&[B::Scalar]>,
) -> Elimination<B::Scalar> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<B::Scalar>> = rows.to_vec();
    let mut r: Vec<B::Scalar> = match rhs {
        Some(r) => r.to_vec(),
        None => vec![b.zero(); m],
    };
    let mut used_rows = vec![false; m];
    let mut used_cols = vec![false; n];
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in (0..m).filter(|&i| !used_rows[i]) {
            for j in (0..n).filter(|&j| !used_cols[j]) {
                if b.is_zero(&a[i][j]) {
                    continue;
                }
                let s = b.pivot_score(&a[i][j]);
                if best.is_none_or(|(_, _, t)| s > t) {
                    best = Some((i, j, s));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        used_rows[pi] = true;
        used_cols[pj] = true;
        let pv = a[pi][pj].clone();
        let inv = b.inv(&pv).expect("pivot is nonzero");
        for i in 0..m {
            if i == pi || b.is_zero(&a[i][pj]) {
                continue;
            }
            let factor = b.mul(&a[i][pj], &inv);
            #[allow(clippy::needless_range_loop)]
            for j in 0..n {
                let t = b.mul(&factor, &a[pi][j]);
                a[i][j] = b.sub(&a[i][j], &t);
            }
            let t = b.mul(&factor, &r[pi]);
            r[i] = b.sub(&r[i], &t);
        }
        pivots.push(Pivot {
            row: pi,
            col: pj,
            value: pv,
        });
    }
    Elimination {
        rows: a,
        rhs: r,
        pivots,
    }
}

/// Full-pivot elimination of `rows`, choosing the best-scoring pivot each step.
pub fn full_pivot_eliminate<B: Backend>(b: &B, rows: &[Vec<B::Scalar>]) -> Elimination<B::Scalar> {
    eliminate(b, rows, None)
}

/// A basic solution of `A·x = r`: pivot columns are solved, free columns
/// are set to zero. Inconsistent rows are ignored.
pub fn solve_basic<B: Backend>(b: &B, a: &[Vec<B::Scalar>], r: &[B::Scalar]) -> Vec<B::Scalar> {
    let n = a.first().map_or(0, Vec::len);
    let e = eliminate(b, a, Some(r));
    let mut x = vec![b.zero(); n];
    for p in &e.pivots {
        let inv = b.inv(&p.value).expect("pivot is nonzero");
        x[p.col] = b.mul(&e.rhs[p.row], &inv);
    }
    x
}

/// Solves the square system `A·x = r`; fails when a pivot vanishes.
pub fn solve_square<B: Backend>(
    b: &B,
    a: &[Vec<B::Scalar>],
    r: &[B::Scalar],
) -> Result<Vec<B::Scalar>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) || r.len() != n {
        return Err(Error::Shape(format!(
            "expected a square system of size {n}"
        )));
    }
    let e = eliminate(b, a, Some(r));
    if e.pivots.len() < n {
        return Err(Error::SingularJacobian(format!(
            "rank {} < {n}",
            e.pivots.len()
        )));
    }
    let mut x = vec![b.zero(); n];
    for p in &e.pivots {
        x[p.col] = b.mul(&e.rhs[p.row], &b.inv(&p.value)?);
    }
    Ok(x)
}

/// Determinant by full-pivot elimination.
pub fn determinant<B: Backend>(b: &B, a: &[Vec<B::Scalar>]) -> Result<B::Scalar> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    let e = full_pivot_eliminate(b, a);
    if e.pivots.len() < n {
        return Ok(b.zero());
    }
    // Sign of the permutation row -> col.
    let mut perm: Vec<usize> = vec![0; n];
    for p in &e.pivots {
        perm[p.row] = p.col;
    }
    let mut sign_neg = false;
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign_neg = !sign_neg;
        }
    }
    let mut d = b.one();
    for p in &e.pivots {
        d = b.mul(&d, &p.value);
    }
    Ok(if sign_neg { b.neg(&d) } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{PadicBackend, RealBackend};

    #[test]
    fn real_solve_and_det() {
        let a = vec![vec![0.0, 2.0], vec![3.0, 1.0]];
        let x = solve_square(&RealBackend, &a, &[4.0, 5.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
        assert!((determinant(&RealBackend, &a).unwrap() + 6.0).abs() < 1e-14);
        let sing = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(matches!(
            solve_square(&RealBackend, &sing, &[1.0, 1.0]),
            Err(Error::SingularJacobian(_))
        ));
    }

    #[test]
    fn padic_det_and_basic_solution() {
        let b = PadicBackend::new(5, 8).unwrap();
        let m = |rows: &[[i64; 3]]| -> Vec<Vec<_>> {
            rows.iter()
                .map(|r| r.iter().map(|&x| b.int(x)).collect())
                .collect()
        };
        let a = m(&[[2, 1, 0], [1, 3, 5], [0, 4, 1]]);
        // 2·(3−20) − 1·(1−0) = −35
        let d = determinant(&b, &a).unwrap();
        assert!(d.sub(&b.int(-35)).valuation() >= 8);
        let wide = m(&[[5, 1, 0]]);
        let x = solve_basic(&b, &wide, &[b.int(3)]);
        assert_eq!(x, vec![b.int(0), b.int(3), b.int(0)]);
    }
}
