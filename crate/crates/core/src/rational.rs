//! Exact rational scalar used throughout the symbolic engine.
//!
//! `Rational` is `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator. This module adds the few helpers the
//! rest of the crate needs: checked division, factorials and the `"p/q"`
//! rendering used by every serialized output.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `num / den` as an exact rational. Panics on a zero denominator; only use
/// this with literal constants.
pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "ratio with zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// Integer power with negative exponents allowed for nonzero bases.
pub fn pow(base: &Rational, exp: i32) -> Result<Rational> {
    if exp < 0 && base.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(num_traits::pow::Pow::pow(base, exp))
}

/// Always renders as `p/q`, including integers (`"1/1"`, `"-2/1"`).
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_pq(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

/// Nearest `f64`. Falls back to a scaled division when numerator or
/// denominator overflow `f64` on their own.
pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb.max(db) - 900;
    let scale = |x: &BigInt| -> f64 {
        if shift > 0 {
            (x >> (shift as usize)).to_f64().unwrap_or(f64::NAN)
        } else {
            x.to_f64().unwrap_or(f64::NAN)
        }
    };
    let v = scale(r.numer()) / scale(r.denom());
    if r.is_negative() && v > 0.0 {
        -v
    } else {
        v
    }
}

static FACTORIALS: Mutex<Vec<BigInt>> = Mutex::new(Vec::new());

/// `k!` from a process-wide memo table.
pub fn factorial(k: usize) -> BigInt {
    let mut table = FACTORIALS.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(BigInt::one());
    }
    while table.len() <= k {
        let i = table.len();
        let next = &table[i - 1] * BigInt::from(i);
        table.push(next);
    }
    table[k].clone()
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}
