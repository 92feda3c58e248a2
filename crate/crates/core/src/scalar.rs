//! Scalars in exact-rational or complex double-precision mode.
//!
//! Every engine is generic over [`Scalar`], so a single computation never
//! mixes modes. Mode mismatches can only happen at the I/O boundary, where a
//! [`Value`] literal is converted into a concrete scalar type.

use std::fmt::{self, Debug};
use std::str::FromStr;

use num::bigint::Sign;
use num::traits::{One, Zero};
use num::{BigInt, BigRational, Complex, Signed, ToPrimitive};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Complex,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "complex" => Ok(Mode::Complex),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Complex => "complex",
        })
    }
}

/// Field element used by every engine.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
    + 'static
{
    const MODE: Mode;

    fn from_ratio(r: &BigRational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Principal fourth root. In exact mode this is `None` unless the value
    /// is the fourth power of a rational.
    fn fourth_root(&self) -> Option<Self>;

    /// Absolute value as a float, for residuals.
    fn magnitude(&self) -> f64;

    fn to_value(&self) -> Value;

    fn from_value(v: &Value) -> Result<Self>;

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Integer power allowing negative exponents; `None` for `0^-k`.
    fn powi(&self, exp: i64) -> Option<Self> {
        if exp >= 0 {
            Some(self.pow(exp as u64))
        } else {
            self.inverse().map(|inv| inv.pow(exp.unsigned_abs()))
        }
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Exact;

    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }

    fn fourth_root(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let num = exact_fourth_root(self.numer())?;
        let den = exact_fourth_root(self.denom())?;
        Some(BigRational::new(num, den))
    }

    fn magnitude(&self) -> f64 {
        ratio_to_f64(self).abs()
    }

    fn to_value(&self) -> Value {
        Value::Exact(self.clone())
    }

    fn from_value(v: &Value) -> Result<Self> {
        match v {
            Value::Exact(r) => Ok(r.clone()),
            Value::Complex(c) => Err(Error::Mode(format!(
                "complex literal [{}, {}] used in exact mode",
                c.re, c.im
            ))),
        }
    }
}

impl Scalar for Complex64 {
    const MODE: Mode = Mode::Complex;

    fn from_ratio(r: &BigRational) -> Self {
        Complex::new(ratio_to_f64(r), 0.0)
    }

    fn fourth_root(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Complex::zero());
        }
        Some(Complex::from_polar(self.norm().powf(0.25), self.arg() / 4.0))
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_value(&self) -> Value {
        Value::Complex(*self)
    }

    fn from_value(v: &Value) -> Result<Self> {
        Ok(match v {
            Value::Exact(r) => Self::from_ratio(r),
            Value::Complex(c) => *c,
        })
    }

    fn inverse(&self) -> Option<Self> {
        if self.norm() == 0.0 {
            None
        } else {
            Some(self.inv())
        }
    }
}

fn exact_fourth_root(n: &BigInt) -> Option<BigInt> {
    let root = n.nth_root(4);
    let check = &root * &root;
    if &(&check * &check) == n {
        Some(root)
    } else {
        None
    }
}

/// Converts a rational to the nearest-ish `f64`, tolerating huge operands.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
    // rescale by a power of two so both sides fit comfortably in f64
    let scaled = if shift > 0 {
        BigRational::new(r.numer().clone(), r.denom() << (shift as usize))
    } else {
        BigRational::new(r.numer() << ((-shift) as usize), r.denom().clone())
    };
    let mantissa = scaled.numer().to_f64().unwrap_or(f64::NAN) / scaled.denom().to_f64().unwrap_or(f64::NAN);
    mantissa * 2f64.powi(shift as i32)
}

/// Natural logarithm of a positive big integer.
pub fn ln_bigint(n: &BigInt) -> f64 {
    assert!(n.sign() == Sign::Plus, "logarithm of a non-positive integer");
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Mode-tagged scalar literal, as found in JSON and on the command line.
///
/// Exact values serialize as the string `"p/q"`; complex values as `[re, im]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Complex(Complex64),
}

impl Value {
    pub fn mode(&self) -> Mode {
        match self {
            Value::Exact(_) => Mode::Exact,
            Value::Complex(_) => Mode::Complex,
        }
    }
}

/// Formats a rational as `p/q`, keeping the denominator even when it is 1.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
            let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("`{s}`: zero denominator")));
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(
            BigInt::from_str(s).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?,
        ),
    };
    Ok(parsed)
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => f.write_str(&format_ratio(r)),
            Value::Complex(c) => write!(f, "[{}, {}]", c.re, c.im),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Exact(r) => serializer.serialize_str(&format_ratio(r)),
            Value::Complex(c) => [c.re, c.im].serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Pair([f64; 2]),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => parse_ratio(&s).map(Value::Exact).map_err(de::Error::custom),
            Raw::Pair([re, im]) => Ok(Value::Complex(Complex::new(re, im))),
            Raw::Int(n) => Ok(Value::Exact(BigRational::from_integer(n.into()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_fourth_roots() {
        assert_eq!(rat(16, 1).fourth_root(), Some(rat(2, 1)));
        assert_eq!(rat(81, 16).fourth_root(), Some(rat(3, 2)));
        assert_eq!(rat(1, 1).fourth_root(), Some(rat(1, 1)));
        assert_eq!(rat(2, 1).fourth_root(), None);
        assert_eq!(rat(-16, 1).fourth_root(), None);
    }

    #[test]
    fn principal_complex_root() {
        let q = Complex64::from_polar(1.0, std::f64::consts::PI / 5.0);
        let r = q.fourth_root().unwrap();
        let expected = Complex64::from_polar(1.0, std::f64::consts::PI / 20.0);
        assert!((r - expected).norm() < 1e-12);
    }

    #[test]
    fn complex_literal_rejected_in_exact_mode() {
        let v = Value::Complex(Complex::new(1.0, 0.5));
        assert!(matches!(BigRational::from_value(&v), Err(Error::Mode(_))));
        assert!(Complex64::from_value(&Value::Exact(rat(3, 4))).is_ok());
    }

    #[test]
    fn value_json_forms() {
        let v: Value = serde_json::from_str("\"-3/6\"").unwrap();
        assert_eq!(v, Value::Exact(rat(-1, 2)));
        assert_eq!(serde_json::to_string(&v).unwrap(), "\"-1/2\"");
        let c: Value = serde_json::from_str("[0.5, -1.0]").unwrap();
        assert_eq!(c, Value::Complex(Complex::new(0.5, -1.0)));
        let i: Value = serde_json::from_str("7").unwrap();
        assert_eq!(serde_json::to_string(&i).unwrap(), "\"7/1\"");
    }

    #[test]
    fn powers() {
        assert_eq!(rat(2, 3).pow(3), rat(8, 27));
        assert_eq!(rat(2, 3).powi(-2), Some(rat(9, 4)));
        assert_eq!(rat(0, 1).powi(-1), None);
    }

    #[test]
    fn big_conversions() {
        let huge = BigInt::from(3).pow(1000u32);
        let ln = ln_bigint(&huge);
        assert!((ln - 1000.0 * 3f64.ln()).abs() < 1e-9);
        let r = BigRational::new(BigInt::from(10).pow(400u32), BigInt::from(10).pow(399u32));
        assert!((ratio_to_f64(&r) - 10.0).abs() < 1e-12);
    }
}
