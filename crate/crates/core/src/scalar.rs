//! Scalar bounds and helpers for exact rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Field-like scalar the generic linear algebra runs over.
///
/// Implemented for `f32`, `f64` and `BigRational`. Only the rational
/// instance gives exact answers; the float instances exist for display
/// and quick experiments.
pub trait Scalar:
    Clone + fmt::Debug + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar represents small integers")
    }
}

impl<T> Scalar for T where
    T: Clone + fmt::Debug + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync
{
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses "p/q" or "p". The result is reduced with a positive denominator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(Error::ParseRational(s.to_string()));
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let numer = BigInt::from_str(n).map_err(|_| Error::ParseRational(s.to_string()))?;
    let denom = BigInt::from_str(d).map_err(|_| Error::ParseRational(s.to_string()))?;
    if denom.is_zero() {
        return Err(Error::ParseRational(s.to_string()));
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical text: "p/q", or "p" for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn checked_div(x: &Rational, y: &Rational) -> Result<Rational> {
    if y.is_zero() {
        Err(Error::DivisionByZero)
    } else {
        Ok(x / y)
    }
}

/// Smallest non-negative integer `k` with `k² ≥ x`.
pub fn ceil_sqrt(x: &Rational) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    let target = x.ceil().to_integer();
    let mut k = target.sqrt();
    while Rational::from_integer(&k * &k) < *x {
        k += 1;
    }
    k
}

/// Positive rational `g` such that `values / g` is a primitive integer vector.
/// Returns zero when every value is zero.
pub fn content(values: &[Rational]) -> Rational {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for v in values.iter().filter(|v| !v.is_zero()) {
        num_gcd = num_gcd.gcd(v.numer());
        den_lcm = den_lcm.lcm(v.denom());
    }
    if num_gcd.is_zero() {
        Rational::zero()
    } else {
        Rational::new(num_gcd, den_lcm)
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapters writing rationals as canonical strings.
pub mod serde_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod array4 {
        use serde::ser::SerializeSeq;
        use serde::Serializer;

        use crate::Rational;

        pub fn serialize<S: Serializer>(r: &[Rational; 4], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(4))?;
            for v in r {
                seq.serialize_element(&v.to_string())?;
            }
            seq.end()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), rational(3, 2));
        assert_eq!(parse_rational("-3/-6").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(format_rational(&rational(-2, 4)), "-1/2");
        assert_eq!(format_rational(&int(5)), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1 /2").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(checked_div(&int(1), &int(0)), Err(Error::DivisionByZero));
        assert_eq!(checked_div(&int(1), &int(4)).unwrap(), rational(1, 4));
    }

    #[test]
    fn ceil_sqrt_bounds() {
        assert_eq!(ceil_sqrt(&int(0)), BigInt::from(0));
        assert_eq!(ceil_sqrt(&int(1)), BigInt::from(1));
        assert_eq!(ceil_sqrt(&int(2)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&int(16)), BigInt::from(4));
        assert_eq!(ceil_sqrt(&rational(1, 4)), BigInt::from(1));
        assert_eq!(ceil_sqrt(&rational(25, 4)), BigInt::from(3));
        for n in 0..200i64 {
            let k = ceil_sqrt(&rational(n, 3));
            let k = k.to_i64().unwrap();
            assert!(3 * k * k >= n);
            assert!(k == 0 || 3 * (k - 1) * (k - 1) < n);
        }
    }

    #[test]
    fn content_of_forms() {
        let v = [rational(4, 3), rational(25, 3), rational(1, 3), int(0)];
        assert_eq!(content(&v), rational(1, 3));
        assert_eq!(content(&[int(0), int(0)]), int(0));
        assert_eq!(content(&[rational(-2, 3), rational(4, 9)]), rational(2, 9));
    }
}
