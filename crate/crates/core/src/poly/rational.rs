//! Exact rational scalars.
//!
//! `BigRational` keeps every value reduced with a positive denominator, and
//! zero is always `0/1`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den`, reduced. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `num` or `num/den`, with an optional leading sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg}: `{text}`") };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num = BigInt::from_str(num).map_err(|_| bad("bad numerator"))?;
    match den {
        None => Ok(Rational::from_integer(num)),
        Some(d) => {
            let den = BigInt::from_str(d).map_err(|_| bad("bad denominator"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Formats as `num` for integers and `num/den` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: fall back to scaled division
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Serde adapter storing a rational as its `num/den` string.
pub mod serde_str {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = ratio(6, -4);
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(format_rational(&ratio(0, -7)), "0");
        assert_eq!(ratio(0, -7), int(0));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-5", "7/3", "-12/5", "-100000000000000000000000000001/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
    }
}
