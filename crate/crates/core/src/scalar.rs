//! Scalar abstraction shared by the linear algebra, polynomial and bracket
//! kernels.
//!
//! Everything downstream of this module is written against [`Scalar`]. The
//! exact instance is [`Rational`](crate::Rational) (`BigRational`); `f64` is
//! also a `Scalar` and is handy for quick numeric probes, but none of the
//! verification routines use it.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, NumAssign, Zero};

use crate::error::{Error, Result};

/// A field element usable by the generic kernels.
pub trait Scalar:
    Num + NumAssign + std::ops::Neg<Output = Self> + Clone + Debug + Display + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Whether the value should be treated as zero by elimination. Exact
    /// types use structural zero.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc *= self.clone();
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        f64::from_i64(n).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-12
    }
}

/// Exact rational numbers, always reduced with positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_frac(num, den)
}

pub fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Parses `"p/q"`, `"p"` or a decimal-free integer into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let value = match trimmed.split_once('/') {
        Some((n, d)) => {
            let num = BigInt::from_str(n.trim())
                .map_err(|e| Error::parse("rational", format!("`{trimmed}`: {e}")))?;
            let den = BigInt::from_str(d.trim())
                .map_err(|e| Error::parse("rational", format!("`{trimmed}`: {e}")))?;
            if den.is_zero() {
                return Err(Error::parse("rational", format!("`{trimmed}`: zero denominator")));
            }
            BigRational::new(num, den)
        }
        None => BigRational::from_integer(
            BigInt::from_str(trimmed).map_err(|e| Error::parse("rational", format!("`{trimmed}`: {e}")))?,
        ),
    };
    Ok(value)
}

/// Canonical string form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn is_integer(value: &Rational) -> bool {
    value.is_integer()
}

/// Serde adapter writing rationals as canonical strings.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = RawRational::deserialize(d)?;
        match raw {
            RawRational::Text(t) => parse_rational(&t).map_err(serde::de::Error::custom),
            RawRational::Int(n) => Ok(super::int(n)),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum RawRational {
        Text(String),
        Int(i64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_are_canonical() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&int(0)), "0");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn reduced_invariant() {
        let r = rat(-10, -4);
        assert_eq!(r.numer(), &BigInt::from(5));
        assert_eq!(r.denom(), &BigInt::from(2));
    }
}
