//! Exact rationals, the extended half-line `[.., +∞]`, and exact/bracketed
//! rational powers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for `n/d` as a [`Rational`]. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim())
            .map_err(|_| Error::InvalidInput(format!("bad rational numerator in {s:?}")))?;
        let d = BigInt::from_str(d.trim())
            .map_err(|_| Error::InvalidInput(format!("bad rational denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(n, d))
    } else {
        BigInt::from_str(t)
            .map(Rational::from_integer)
            .map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))
    }
}

pub fn fmt_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// A rational number or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinite,
}

impl Extended {
    pub fn zero() -> Self {
        Extended::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(x) => to_f64(x),
            Extended::Infinite => f64::INFINITY,
        }
    }

    /// `self - rhs` for a finite `rhs`; `∞ - r = ∞`.
    pub fn sub_finite(&self, rhs: &Rational) -> Extended {
        match self {
            Extended::Finite(x) => Extended::Finite(x - rhs),
            Extended::Infinite => Extended::Infinite,
        }
    }

    /// Product with a nonnegative rational; `∞ · 0 = 0` (measure-theoretic convention).
    pub fn mul_nonneg(&self, k: &Rational) -> Extended {
        match self {
            Extended::Finite(x) => Extended::Finite(x * k),
            Extended::Infinite if k.is_zero() => Extended::zero(),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl From<Rational> for Extended {
    fn from(x: Rational) -> Self {
        Extended::Finite(x)
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for &Extended {
    type Output = Extended;
    fn add(self, rhs: &Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        }
    }
}

impl Add for Extended {
    type Output = Extended;
    fn add(self, rhs: Extended) -> Extended {
        &self + &rhs
    }
}

impl Mul<&Rational> for &Extended {
    type Output = Extended;
    fn mul(self, rhs: &Rational) -> Extended {
        self.mul_nonneg(rhs)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Extended {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(Extended::Infinite),
            other => parse_rational(other).map(Extended::Finite),
        }
    }
}

fn exact_int_root(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// `x^(1/k)` when it is rational, for `x >= 0`.
pub fn exact_root(x: &Rational, k: u32) -> Option<Rational> {
    if x.is_negative() || k == 0 {
        return None;
    }
    if k == 1 {
        return Some(x.clone());
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let rn = exact_int_root(n, k)?;
    let rd = exact_int_root(d, k)?;
    Some(Rational::new(
        BigInt::from_biguint(Sign::Plus, rn),
        BigInt::from_biguint(Sign::Plus, rd),
    ))
}

/// Splits a positive rational exponent into `(numerator, denominator)` as u32.
pub fn exponent_parts(p: &Rational) -> Option<(u32, u32)> {
    if !p.is_positive() {
        return None;
    }
    Some((p.numer().to_u32()?, p.denom().to_u32()?))
}

/// `x^p` for `x >= 0` and rational `p > 0`, when the result is rational.
pub fn rational_pow(x: &Rational, p: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(Rational::zero());
    }
    if x.is_one() {
        return Some(Rational::one());
    }
    let (r, k) = exponent_parts(p)?;
    // keep the integer power bounded
    if r > 64 {
        return None;
    }
    let powered = num_traits::pow(x.clone(), r as usize);
    exact_root(&powered, k)
}

/// Floating `x^p` for `x >= 0`.
pub fn pow_f64(x: &Rational, p: f64) -> f64 {
    if x.is_zero() {
        0.0
    } else {
        to_f64(x).powf(p)
    }
}

/// Rational bracket `lo <= x^(1/k) <= hi` with `hi - lo <= 2^-bits` (for `x >= 0`).
pub fn root_bracket(x: &Rational, k: u32, bits: u32) -> (Rational, Rational) {
    debug_assert!(!x.is_negative());
    if k == 1 {
        return (x.clone(), x.clone());
    }
    let scale = BigInt::one() << (bits as usize * k as usize);
    let n = x.numer() * &scale;
    let d = x.denom();
    let (fl, rem) = n.div_rem(d);
    let ce = if rem.is_zero() { fl.clone() } else { &fl + 1 };
    let lo_int = fl.magnitude().nth_root(k);
    let hi_root = ce.magnitude().nth_root(k);
    let hi_int = if num_traits::pow(hi_root.clone(), k as usize) == *ce.magnitude() {
        hi_root
    } else {
        hi_root + 1u32
    };
    let den = BigInt::one() << bits as usize;
    (
        Rational::new(BigInt::from_biguint(Sign::Plus, lo_int), den.clone()),
        Rational::new(BigInt::from_biguint(Sign::Plus, hi_int), den),
    )
}

/// Bracket for `x^(r/k)`.
pub fn pow_bracket(x: &Rational, r: u32, k: u32, bits: u32) -> (Rational, Rational) {
    let powered = num_traits::pow(x.abs(), r as usize);
    root_bracket(&powered, k, bits)
}
