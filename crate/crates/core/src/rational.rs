//! Exact rationals and their text form.
//!
//! Every probability, posterior and value in the crate is a [`Rational`]
//! (an arbitrary-precision fraction kept in lowest terms with a positive
//! denominator). The text form is `"a/b"`, or `"a"` when the denominator
//! is one; [`parse_rational`] accepts exactly what [`render`] emits.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for a small fraction. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn half() -> Rational {
    rat(1, 2)
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    Rational::from_str(text).map_err(|e| Error::Parse(format!("rational {text:?}: {e}")))
}

pub fn render(value: &Rational) -> String {
    value.to_string()
}

pub fn is_probability(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// Binomial coefficient as an exact rational.
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// Serde adapter storing a rational as its `"a/b"` string.
pub mod serde_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&super::render(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(de)?;
        super::parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Same as [`serde_str`] for a vector of rationals.
pub mod serde_str_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(values: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&super::render(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(de)?;
        texts
            .iter()
            .map(|t| super::parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_on_parse() {
        assert_eq!(render(&parse_rational("6/8").unwrap()), "3/4");
        assert_eq!(render(&parse_rational("4/2").unwrap()), "2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(9, 5), int(126));
        assert_eq!(binomial(4, 0), int(1));
        assert_eq!(binomial(3, 4), int(0));
    }
}
