//! Exact rational scalars and their `"p/q"` wire format.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// 2^e as an exact rational, for any sign of `e`.
pub fn pow2(e: i64) -> Rat {
    let base = BigInt::from(2);
    if e >= 0 {
        Rat::from_integer(base.pow(e as u32))
    } else {
        Rat::new(BigInt::one(), base.pow((-e) as u32))
    }
}

/// x^e for integer `e`; negative exponents reject zero.
pub fn rat_powi(x: &Rat, e: i64) -> Result<Rat> {
    if e >= 0 {
        Ok(x.pow(e as i32))
    } else if x.is_zero() {
        Err(Error::Singular {
            context: "rational power".into(),
            reason: "0 raised to a negative exponent".into(),
        })
    } else {
        Ok(x.pow(e as i32))
    }
}

/// Exact square root when the rational is a perfect square.
pub fn rat_sqrt(x: &Rat) -> Result<Rat> {
    if x.is_negative() {
        return Err(Error::domain("square root of a negative rational"));
    }
    let num = x.numer().sqrt();
    let den = x.denom().sqrt();
    if &(&num * &num) == x.numer() && &(&den * &den) == x.denom() {
        Ok(Rat::new(num, den))
    } else {
        Err(Error::Inexact(format!("sqrt({x})")))
    }
}

/// Renders `p` or `p/q`, with the sign on the numerator.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q`. The denominator must be nonzero.
pub fn parse_rat(s: &str, context: &str) -> Result<Rat> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .trim()
        .parse()
        .map_err(|_| Error::parse(context, format!("invalid integer {num_str:?}")))?;
    let den: BigInt = den_str
        .trim()
        .parse()
        .map_err(|_| Error::parse(context, format!("invalid integer {den_str:?}")))?;
    if den.is_zero() {
        return Err(Error::parse(context, "zero denominator"));
    }
    Ok(Rat::new(num, den))
}
