//! Scalar kinds for coordinates: exact big integers for laminations and
//! doubles for measured foliations.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{Number, Value};

use crate::error::{Error, Result};

pub trait Scalar: Clone + Debug + Display + PartialOrd + Signed + Send + Sync + 'static {
    /// True for exact arithmetic; enables the parity checks.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Halves `self`, failing on odd integers.
    fn half(&self) -> Result<Self>;

    fn parse(text: &str) -> Result<Self>;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn max_of(x: Self, y: Self) -> Self {
        if x >= y {
            x
        } else {
            y
        }
    }
}

impl Scalar for BigInt {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn half(&self) -> Result<Self> {
        if (self % 2u32).is_zero() {
            Ok(self / 2u32)
        } else {
            Err(Error::Parity(self.to_string()))
        }
    }

    fn parse(text: &str) -> Result<Self> {
        BigInt::from_str(text.trim()).map_err(|_| Error::BadNumber(text.trim().to_string()))
    }

    fn to_json(&self) -> Value {
        Value::Number(Number::from_str(&self.to_string()).expect("integer literal is valid JSON"))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(num) => Self::parse(&num.to_string()),
            Value::String(s) => Self::parse(s),
            other => Err(Error::BadNumber(other.to_string())),
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn half(&self) -> Result<Self> {
        Ok(self / 2.0)
    }

    fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::BadNumber(t.to_string())),
        }
    }

    fn to_json(&self) -> Value {
        Number::from_f64(*self).map_or(Value::Null, Value::Number)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(num) => Self::parse(&num.to_string()),
            other => Err(Error::BadNumber(other.to_string())),
        }
    }
}

/// Natural logarithm of a big integer's absolute value, valid far past the
/// range of `f64`.
pub fn ln_abs(x: &BigInt) -> f64 {
    let mag = x.abs();
    let bits = mag.bits();
    if bits <= 1000 {
        return ToPrimitive::to_f64(&mag).unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = &mag >> shift;
    ToPrimitive::to_f64(&top).unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}
