//! The scalar abstraction behind the two run modes.
//!
//! Exact mode computes over [`Rat`] and float mode over `f64`; everything
//! above this module is generic over [`Scalar`] so the same evaluation code
//! serves both.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rat::{format_rat, pow2, rat_powi, rat_sqrt, Rat};

/// Run mode selector carried by configs and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }

    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::parse("mode", format!("expected exact|float, got {other:?}"))),
        }
    }
}

pub trait Scalar: Clone + PartialEq + PartialOrd + Debug + Display + Sized {
    /// Exact hashable key for memoized evaluation.
    type Key: Eq + Hash + Clone;

    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn from_int(v: i64) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division; callers must exclude a zero divisor.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn is_zero(&self) -> bool;

    /// Non-negative integer power.
    fn pow_u(&self, e: u32) -> Self;

    /// Multiplication by 2^e.
    fn scale_pow2(&self, e: i64) -> Self;

    /// `self^alpha` for `self >= 0`. Exact mode supports integer `alpha`
    /// only; `0^alpha` with `alpha <= 0` is singular.
    fn pow_rat(&self, alpha: &Rat) -> Result<Self>;

    fn sqrt(&self) -> Result<Self>;

    fn key(&self) -> Self::Key;
    fn to_f64(&self) -> f64;
    fn to_json(&self) -> Value;
}

impl Scalar for Rat {
    type Key = Rat;

    const EXACT: bool = true;

    fn zero() -> Self {
        num_traits::Zero::zero()
    }

    fn one() -> Self {
        num_traits::One::one()
    }

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn from_int(v: i64) -> Self {
        crate::rat::rat_int(v)
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }

    fn sub(&self, o: &Self) -> Self {
        self - o
    }

    fn mul(&self, o: &Self) -> Self {
        self * o
    }

    fn div(&self, o: &Self) -> Self {
        self / o
    }

    fn neg(&self) -> Self {
        -self
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn pow_u(&self, e: u32) -> Self {
        self.pow(e as i32)
    }

    fn scale_pow2(&self, e: i64) -> Self {
        self * pow2(e)
    }

    fn pow_rat(&self, alpha: &Rat) -> Result<Self> {
        if Zero::is_zero(self) {
            return if alpha.is_positive() {
                Ok(<Rat as Scalar>::zero())
            } else {
                Err(Error::Singular {
                    context: "power control".into(),
                    reason: format!("0^{} is undefined", format_rat(alpha)),
                })
            };
        }
        if alpha.is_integer() {
            let e = alpha.to_integer().to_i64().ok_or_else(|| {
                Error::UnsupportedExponent(format!("exponent {} too large", format_rat(alpha)))
            })?;
            rat_powi(self, e)
        } else {
            Err(Error::Inexact(format!(
                "{}^{} (fractional exponent in exact mode)",
                format_rat(self),
                format_rat(alpha)
            )))
        }
    }

    fn sqrt(&self) -> Result<Self> {
        rat_sqrt(self)
    }

    fn key(&self) -> Rat {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_json(&self) -> Value {
        Value::String(format_rat(self))
    }
}

impl Scalar for f64 {
    type Key = u64;

    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_rat(r: &Rat) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }

    fn sub(&self, o: &Self) -> Self {
        self - o
    }

    fn mul(&self, o: &Self) -> Self {
        self * o
    }

    fn div(&self, o: &Self) -> Self {
        self / o
    }

    fn neg(&self) -> Self {
        -self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn pow_u(&self, e: u32) -> Self {
        self.powi(e as i32)
    }

    fn scale_pow2(&self, e: i64) -> Self {
        self * (e as f64).exp2()
    }

    fn pow_rat(&self, alpha: &Rat) -> Result<Self> {
        let a = ToPrimitive::to_f64(alpha).unwrap_or(f64::NAN);
        if *self == 0.0 && a <= 0.0 {
            return Err(Error::Singular {
                context: "power control".into(),
                reason: format!("0^{a} is undefined"),
            });
        }
        Ok(self.powf(a))
    }

    fn sqrt(&self) -> Result<Self> {
        if *self < 0.0 {
            Err(Error::domain("square root of a negative number"))
        } else {
            Ok(f64::sqrt(*self))
        }
    }

    fn key(&self) -> u64 {
        self.to_bits()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
}
