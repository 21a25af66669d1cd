//! p-adic numbers with capped relative precision.
//!
//! A nonzero value is `p^val · unit` where `unit` is known modulo `p^rel`
//! (`rel ≤ N`, the nominal precision). Zero carries the valuation down to
//! which it is known (`0 + O(p^val)`); an exactly known zero uses a sentinel
//! valuation. Additions that cancel leading digits lose absolute precision,
//! and the loss is tracked rather than hidden.

use std::fmt;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::epoly::Rational;
use crate::error::{Error, Result};

/// Valuation used for an exactly known zero.
pub const EXACT_ZERO: i64 = 1 << 40;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Padic {
    p: u64,
    prec: u32,
    val: i64,
    unit: BigInt,
    rel: u32,
}

pub(crate) fn pow_big(p: u64, e: u32) -> BigInt {
    num::pow(BigInt::from(p), e as usize)
}

/// `v_p(n)` for nonzero `n`, together with `n / p^v`.
fn split_valuation(n: &BigInt, p: u64) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut n = n.clone();
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    (v, n)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

impl Padic {
    pub fn zero_with(p: u64, prec: u32, known_to: i64) -> Self {
        Padic {
            p,
            prec,
            val: known_to.min(EXACT_ZERO),
            unit: BigInt::zero(),
            rel: 0,
        }
    }

    pub fn exact_zero(p: u64, prec: u32) -> Self {
        Self::zero_with(p, prec, EXACT_ZERO)
    }

    fn from_parts(p: u64, prec: u32, val: i64, unit: BigInt, rel: u32) -> Self {
        let rel = rel.min(prec);
        if rel == 0 {
            return Self::zero_with(p, prec, val);
        }
        let unit = unit.mod_floor(&pow_big(p, rel));
        debug_assert!(!(&unit % BigInt::from(p)).is_zero());
        Padic {
            p,
            prec,
            val,
            unit,
            rel,
        }
    }

    pub fn from_rational(q: &Rational, p: u64, prec: u32) -> Self {
        if q.is_zero() {
            return Self::exact_zero(p, prec);
        }
        let (vn, n) = split_valuation(q.numer(), p);
        let (vd, d) = split_valuation(q.denom(), p);
        let m = pow_big(p, prec);
        let unit = (n.mod_floor(&m) * mod_inverse(&d.mod_floor(&m), &m)).mod_floor(&m);
        Self::from_parts(p, prec, vn - vd, unit, prec)
    }

    pub fn from_integer(n: i64, p: u64, prec: u32) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()), p, prec)
    }

    /// `p^val · unit` with the unit taken modulo `p^rel`; `unit` must be
    /// prime to `p` unless it is zero.
    pub fn from_unit(p: u64, prec: u32, val: i64, unit: BigInt, rel: u32) -> Result<Self> {
        if unit.is_zero() {
            return Ok(Self::zero_with(p, prec, val));
        }
        if (&unit % BigInt::from(p)).is_zero() {
            return Err(Error::Format(format!("{unit} is not a {p}-adic unit")));
        }
        Ok(Self::from_parts(p, prec, val, unit, rel))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.val >= EXACT_ZERO
    }

    /// The valuation; for a zero, the valuation to which it is known.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// `min(v_p(x), N)`: the valuation as reported against precision `N`.
    pub fn known_valuation(&self) -> i64 {
        self.val.min(self.prec as i64)
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn relative_precision(&self) -> u32 {
        self.rel
    }

    /// Absolute precision: the value is known modulo `p^abs`.
    pub fn absolute_precision(&self) -> i64 {
        (self.val + self.rel as i64).min(EXACT_ZERO)
    }

    /// The integer in `[0, p^N)` congruent to the value, for values in ℤ_p.
    pub fn residue(&self) -> Option<BigInt> {
        if self.val < 0 {
            return None;
        }
        if self.is_zero() || self.val >= self.prec as i64 {
            return Some(BigInt::zero());
        }
        let m = pow_big(self.p, self.prec);
        Some((pow_big(self.p, self.val as u32) * &self.unit).mod_floor(&m))
    }

    /// Same value re-capped at relative precision `prec`. Raising the cap
    /// treats the unknown digits as zero.
    pub fn with_precision(&self, prec: u32) -> Padic {
        if self.is_zero() {
            return Padic {
                prec,
                ..self.clone()
            };
        }
        let rel = if prec > self.prec {
            prec
        } else {
            self.rel.min(prec)
        };
        Self::from_parts(self.p, prec, self.val, self.unit.clone(), rel)
    }

    fn same_field(&self, other: &Padic) {
        assert_eq!(self.p, other.p, "mixing different primes");
    }

    /// Reduces the absolute precision to at most `abs`.
    fn truncate_abs(&self, abs: i64) -> Padic {
        if abs >= self.absolute_precision() {
            return self.clone();
        }
        if self.is_zero() || abs <= self.val {
            return Self::zero_with(self.p, self.prec, abs);
        }
        Self::from_parts(
            self.p,
            self.prec,
            self.val,
            self.unit.clone(),
            (abs - self.val) as u32,
        )
    }

    pub fn add(&self, other: &Padic) -> Padic {
        self.same_field(other);
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return Padic {
                prec,
                ..other.truncate_abs(self.val)
            };
        }
        if other.is_zero() {
            return Padic {
                prec,
                ..self.truncate_abs(other.val)
            };
        }
        let v0 = self.val.min(other.val);
        let abs = self.absolute_precision().min(other.absolute_precision());
        let scaled = |x: &Padic| pow_big(self.p, (x.val - v0) as u32) * &x.unit;
        let m = pow_big(self.p, (abs - v0) as u32);
        let s = (scaled(self) + scaled(other)).mod_floor(&m);
        if s.is_zero() {
            return Self::zero_with(self.p, prec, abs);
        }
        let (k, u) = split_valuation(&s, self.p);
        let val = v0 + k;
        Self::from_parts(self.p, prec, val, u, (abs - val) as u32)
    }

    pub fn neg(&self) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        Self::from_parts(self.p, self.prec, self.val, -&self.unit, self.rel)
    }

    pub fn sub(&self, other: &Padic) -> Padic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Padic) -> Padic {
        self.same_field(other);
        let prec = self.prec.max(other.prec);
        if self.is_zero() || other.is_zero() {
            let val = self.val.saturating_add(other.val).min(EXACT_ZERO);
            return Self::zero_with(self.p, prec, val);
        }
        Self::from_parts(
            self.p,
            prec,
            self.val + other.val,
            &self.unit * &other.unit,
            self.rel.min(other.rel),
        )
    }

    pub fn inv(&self) -> Result<Padic> {
        if self.is_zero() {
            return Err(Error::Domain("p-adic division by zero".into()));
        }
        let m = pow_big(self.p, self.rel);
        Ok(Self::from_parts(
            self.p,
            self.prec,
            -self.val,
            mod_inverse(&self.unit, &m),
            self.rel,
        ))
    }

    /// Smallest valuation on which `exp` is defined: 2 for `p = 2`, else 1.
    pub fn exp_domain_valuation(p: u64) -> i64 {
        if p == 2 {
            2
        } else {
            1
        }
    }

    /// `exp(x) = Σ x^i / i!` for `v(x) ≥ 1` (`v(x) ≥ 2` when `p = 2`).
    ///
    /// Summation stops once every remaining term has valuation at least the
    /// target precision, using `v_p(i!) ≤ (i − 1)/(p − 1)`.
    pub fn exp(&self) -> Result<Padic> {
        let min_v = Self::exp_domain_valuation(self.p);
        if self.val < min_v {
            return Err(Error::Domain(format!(
                "p-adic E needs valuation ≥ {min_v}, got {}",
                self.val
            )));
        }
        let one = Self::from_integer(1, self.p, self.prec);
        if self.is_zero() {
            return Ok(one.truncate_abs(self.val));
        }
        let target = self.prec as i64;
        let (v, pm1) = (self.val, self.p as i64 - 1);
        let mut sum = one.clone();
        let mut term = one;
        let mut i: i64 = 1;
        // All terms j ≥ i have valuation ≥ (j·v·(p−1) − (j−1)) / (p−1).
        while i * v * pm1 - (i - 1) < target * pm1 {
            let divisor = Self::from_integer(i, self.p, self.prec).inv()?;
            term = term.mul(self).mul(&divisor);
            sum = sum.add(&term);
            i += 1;
        }
        Ok(sum)
    }

    /// `E_p(y) = exp(p·y)` (`exp(4y)` for `p = 2`), total on ℤ_p.
    pub fn exp_p(&self) -> Result<Padic> {
        let scale = if self.p == 2 { 4 } else { self.p as i64 };
        self.mul(&Self::from_integer(scale, self.p, self.prec))
            .exp()
    }

    /// `v(self − other)`, i.e. the number of agreeing p-adic digits.
    pub fn distance_valuation(&self, other: &Padic) -> i64 {
        self.sub(other).valuation()
    }

    /// Nearest rational-free approximation as `f64` (for reports only).
    pub fn to_f64_lossy(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let u = self.unit.to_f64().unwrap_or(f64::NAN);
        u * (self.p as f64).powi(self.val as i32)
    }
}

impl fmt::Display for Padic {
    /// `p^v * u mod p^A` with `A` the absolute precision; exact zero is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return f.write_str("0");
        }
        write!(
            f,
            "{p}^{v} * {u} mod {p}^{a}",
            p = self.p,
            v = self.val,
            u = self.unit,
            a = self.absolute_precision()
        )
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [N={}]", self.prec)
    }
}

impl Padic {
    /// Parses the [`Display`](fmt::Display) form, or a plain rational such as
    /// `-3/4`, as an element of ℚ_p at precision `prec`.
    pub fn parse(s: &str, p: u64, prec: u32) -> Result<Padic> {
        let s = s.trim();
        let bad = || Error::Format(format!("malformed {p}-adic scalar `{s}`"));
        if let Some((lhs, modulus)) = s.split_once(" mod ") {
            let (pv, u) = lhs.split_once(" * ").ok_or_else(bad)?;
            let power = |t: &str| -> Result<i64> {
                let (base, e) = t.trim().split_once('^').ok_or_else(bad)?;
                if base.parse::<u64>().ok() != Some(p) {
                    return Err(Error::Format(format!("`{t}` is not a power of {p}")));
                }
                e.parse().map_err(|_| bad())
            };
            let v = power(pv)?;
            let a = power(modulus)?;
            let u: BigInt = u.trim().parse().map_err(|_| bad())?;
            if a < v || u.is_negative() {
                return Err(bad());
            }
            return Padic::from_unit(p, prec, if u.is_zero() { a } else { v }, u, (a - v) as u32);
        }
        let q: Rational = s.parse().map_err(|_| bad())?;
        Ok(Padic::from_rational(&q, p, prec))
    }
}
