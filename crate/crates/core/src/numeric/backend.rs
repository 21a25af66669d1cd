use std::fmt;

use nalgebra::{DMatrix, DVector};
use num::ToPrimitive;
use rand::Rng;

use super::jet::Point;
use super::linalg::{full_pivot_eliminate, solve_basic};
use super::padic::{pow_big, Padic};
use super::solve::{hensel_solve, newton_solve};
use super::tolerance::ToleranceSpec;
use crate::epoly::{EPoly, Rational, VarId};
use crate::error::{Error, Result};

/// A numeric field in which E-polynomials can be evaluated.
///
/// The backend fixes the scalar type, how `E` is interpreted, and how the
/// tolerance thresholds are read (absolute values for ℝ, valuations for ℚ_p).
#[allow(clippy::wrong_self_convention)]
pub trait Backend: Clone + fmt::Debug + Send + Sync {
    type Scalar: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn name(&self) -> &'static str;
    fn from_rational(&self, q: &Rational) -> Result<Self::Scalar>;
    fn add(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn mul(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn neg(&self, a: &Self::Scalar) -> Self::Scalar;
    fn inv(&self, a: &Self::Scalar) -> Result<Self::Scalar>;
    fn exp(&self, a: &Self::Scalar) -> Result<Self::Scalar>;
    /// Rejects values that cannot be represented (non-finite reals).
    fn check(&self, a: Self::Scalar) -> Result<Self::Scalar>;
    /// True for a zero element (up to known precision for ℚ_p).
    fn is_zero(&self, a: &Self::Scalar) -> bool;
    /// Larger means a better elimination pivot.
    fn pivot_score(&self, a: &Self::Scalar) -> f64;

    fn residual_ok(&self, a: &Self::Scalar, tol: &ToleranceSpec) -> bool;
    fn regular(&self, a: &Self::Scalar, tol: &ToleranceSpec) -> bool;
    fn close(&self, a: &Self::Scalar, b: &Self::Scalar, tol: &ToleranceSpec) -> bool;
    /// A scalar summary for reports: `|a|` for ℝ, the valuation for ℚ_p.
    fn measure(&self, a: &Self::Scalar) -> f64;
    /// The absolute value: `|a|` for ℝ, `p^(-v(a))` for ℚ_p.
    fn abs_value(&self, a: &Self::Scalar) -> f64;
    /// Locally solves the square system `fs` in `unknowns` from the seed
    /// `pt0`: Newton iteration over ℝ, Hensel lifting over ℚ_p.
    fn implicit_solve(
        &self,
        fs: &[EPoly],
        unknowns: &[VarId],
        pt0: &Point<Self::Scalar>,
        tol: &ToleranceSpec,
    ) -> Result<Point<Self::Scalar>>;
    /// Whether all `m` rows of the matrix are independent under `tol`.
    fn full_row_rank(&self, rows: &[Vec<Self::Scalar>], tol: &ToleranceSpec) -> bool;
    /// A minimal-change solution of `J·dx = r` for a possibly non-square `J`.
    fn least_change_step(&self, j: &[Vec<Self::Scalar>], r: &[Self::Scalar]) -> Vec<Self::Scalar>;
    /// A small nonzero offset: a random rational of size `scale` for ℝ, a
    /// random multiple of `p^(nbhd_min_val + 1)` for ℚ_p.
    fn small_offset<R: Rng>(&self, rng: &mut R, scale: f64, tol: &ToleranceSpec) -> Self::Scalar;

    fn format(&self, a: &Self::Scalar) -> String;
    fn parse(&self, s: &str) -> Result<Self::Scalar>;
    /// Header line for serialized scalars, if the backend needs one.
    fn header(&self) -> Option<String>;

    fn zero(&self) -> Self::Scalar {
        self.from_int(0)
    }

    fn one(&self) -> Self::Scalar {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> Self::Scalar {
        self.from_rational(&Rational::from_integer(n.into()))
            .expect("integers embed in every backend")
    }

    fn sub(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar {
        self.add(a, &self.neg(b))
    }
}

/// ℝ with `E = exp`, in 64-bit floating point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RealBackend;

impl Backend for RealBackend {
    type Scalar = f64;

    fn name(&self) -> &'static str {
        "real"
    }

    fn from_rational(&self, q: &Rational) -> Result<f64> {
        q.to_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Overflow(format!("{q} is not representable as f64")))
    }

    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }

    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }

    fn neg(&self, a: &f64) -> f64 {
        -a
    }

    fn inv(&self, a: &f64) -> Result<f64> {
        if *a == 0.0 {
            return Err(Error::Domain("division by zero".into()));
        }
        self.check(1.0 / a)
    }

    fn exp(&self, a: &f64) -> Result<f64> {
        self.check(a.exp())
    }

    fn check(&self, a: f64) -> Result<f64> {
        if a.is_finite() {
            Ok(a)
        } else {
            Err(Error::Overflow(format!("non-finite value {a}")))
        }
    }

    fn is_zero(&self, a: &f64) -> bool {
        *a == 0.0
    }

    fn pivot_score(&self, a: &f64) -> f64 {
        a.abs()
    }

    fn residual_ok(&self, a: &f64, tol: &ToleranceSpec) -> bool {
        a.abs() <= tol.eps_res
    }

    fn regular(&self, a: &f64, tol: &ToleranceSpec) -> bool {
        a.abs() >= tol.eps_reg
    }

    fn close(&self, a: &f64, b: &f64, tol: &ToleranceSpec) -> bool {
        (a - b).abs() <= tol.radius
    }

    fn measure(&self, a: &f64) -> f64 {
        a.abs()
    }

    fn abs_value(&self, a: &f64) -> f64 {
        a.abs()
    }

    fn implicit_solve(
        &self,
        fs: &[EPoly],
        unknowns: &[VarId],
        pt0: &Point<f64>,
        tol: &ToleranceSpec,
    ) -> Result<Point<f64>> {
        newton_solve(fs, unknowns, pt0, tol)
    }

    fn full_row_rank(&self, rows: &[Vec<f64>], tol: &ToleranceSpec) -> bool {
        let m = rows.len();
        if m == 0 {
            return true;
        }
        let n = rows[0].len();
        if n < m {
            return false;
        }
        let mat = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
        let sv = mat.singular_values();
        sv.iter().all(|s| *s >= tol.eps_reg) && sv.len() == m
    }

    fn least_change_step(&self, j: &[Vec<f64>], r: &[f64]) -> Vec<f64> {
        let (m, n) = (j.len(), j.first().map_or(0, Vec::len));
        if m == 0 || n == 0 {
            return vec![0.0; n];
        }
        let mat = DMatrix::from_fn(m, n, |a, b| j[a][b]);
        let rhs = DVector::from_column_slice(r);
        let svd = mat.svd(true, true);
        let smax = svd.singular_values.max();
        let cutoff = (smax * 1e-12).max(f64::MIN_POSITIVE);
        match svd.solve(&rhs, cutoff) {
            Ok(x) => x.iter().copied().collect(),
            Err(_) => vec![0.0; n],
        }
    }

    fn small_offset<R: Rng>(&self, rng: &mut R, scale: f64, _tol: &ToleranceSpec) -> f64 {
        let k: i64 = rng.gen_range(1..=1000);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        sign * (k as f64 / 1000.0) * scale
    }

    fn format(&self, a: &f64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<f64> {
        let s = s.trim();
        if let Ok(x) = s.parse::<f64>() {
            return self
                .check(x)
                .map_err(|_| Error::Format(format!("non-finite `{s}`")));
        }
        let q: Rational = s
            .parse()
            .map_err(|_| Error::Format(format!("malformed real scalar `{s}`")))?;
        self.from_rational(&q)
    }

    fn header(&self) -> Option<String> {
        None
    }
}

/// ℚ_p at relative precision `N`, with `E = exp` on `pℤ_p` (`4ℤ_2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicBackend {
    p: u64,
    precision: u32,
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl PadicBackend {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Format(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(Error::Format("p-adic precision must be at least 1".into()));
        }
        Ok(PadicBackend { p, precision })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The same prime at another precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        PadicBackend {
            p: self.p,
            precision,
        }
    }

    pub fn int(&self, n: i64) -> Padic {
        Padic::from_integer(n, self.p, self.precision)
    }

    /// Parses the header line `p=<p> N=<N>`.
    pub fn from_header(line: &str) -> Result<Self> {
        let bad = || Error::Format(format!("malformed p-adic header `{line}`"));
        let mut p = None;
        let mut n = None;
        for part in line.split_whitespace() {
            match part.split_once('=') {
                Some(("p", v)) => p = v.parse().ok(),
                Some(("N", v)) => n = v.parse().ok(),
                _ => return Err(bad()),
            }
        }
        Self::new(p.ok_or_else(bad)?, n.ok_or_else(bad)?)
    }
}

impl Backend for PadicBackend {
    type Scalar = Padic;

    fn name(&self) -> &'static str {
        "padic"
    }

    fn from_rational(&self, q: &Rational) -> Result<Padic> {
        Ok(Padic::from_rational(q, self.p, self.precision))
    }

    fn add(&self, a: &Padic, b: &Padic) -> Padic {
        a.add(b)
    }

    fn mul(&self, a: &Padic, b: &Padic) -> Padic {
        a.mul(b)
    }

    fn neg(&self, a: &Padic) -> Padic {
        a.neg()
    }

    fn inv(&self, a: &Padic) -> Result<Padic> {
        a.inv()
    }

    fn exp(&self, a: &Padic) -> Result<Padic> {
        a.exp()
    }

    fn check(&self, a: Padic) -> Result<Padic> {
        Ok(a)
    }

    fn is_zero(&self, a: &Padic) -> bool {
        a.is_zero()
    }

    fn pivot_score(&self, a: &Padic) -> f64 {
        if a.is_zero() {
            f64::NEG_INFINITY
        } else {
            -(a.valuation() as f64)
        }
    }

    fn residual_ok(&self, a: &Padic, tol: &ToleranceSpec) -> bool {
        a.valuation() >= tol.res_min_val
    }

    fn regular(&self, a: &Padic, tol: &ToleranceSpec) -> bool {
        !a.is_zero() && a.valuation() <= tol.reg_max_val
    }

    fn close(&self, a: &Padic, b: &Padic, tol: &ToleranceSpec) -> bool {
        a.distance_valuation(b) >= tol.nbhd_min_val
    }

    fn measure(&self, a: &Padic) -> f64 {
        a.known_valuation() as f64
    }

    fn abs_value(&self, a: &Padic) -> f64 {
        if a.is_zero() {
            0.0
        } else {
            (self.p as f64).powf(-(a.valuation() as f64))
        }
    }

    fn implicit_solve(
        &self,
        fs: &[EPoly],
        unknowns: &[VarId],
        pt0: &Point<Padic>,
        _tol: &ToleranceSpec,
    ) -> Result<Point<Padic>> {
        hensel_solve(fs, unknowns, pt0, self)
    }

    /// Full-pivot elimination with minimal-valuation pivots; the sum of the
    /// pivot valuations is the least valuation of a maximal minor.
    fn full_row_rank(&self, rows: &[Vec<Padic>], tol: &ToleranceSpec) -> bool {
        let m = rows.len();
        if m == 0 {
            return true;
        }
        let elim = full_pivot_eliminate(self, rows);
        elim.pivots.len() == m
            && elim.pivots.iter().map(|p| p.value.valuation()).sum::<i64>() <= tol.reg_max_val
    }

    fn least_change_step(&self, j: &[Vec<Padic>], r: &[Padic]) -> Vec<Padic> {
        solve_basic(self, j, r)
    }

    fn small_offset<R: Rng>(&self, rng: &mut R, _scale: f64, tol: &ToleranceSpec) -> Padic {
        let k: i64 = rng.gen_range(1..self.p.min(1 << 20) as i64);
        let shift = (tol.nbhd_min_val + 1).max(1) as u32;
        let m = num::BigInt::from(k) * pow_big(self.p, shift);
        Padic::from_rational(&Rational::from_integer(m), self.p, self.precision)
    }

    fn format(&self, a: &Padic) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<Padic> {
        Padic::parse(s, self.p, self.precision)
    }

    fn header(&self) -> Option<String> {
        Some(format!("p={} N={}", self.p, self.precision))
    }
}
