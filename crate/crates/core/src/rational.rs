//! Exact rational numbers and their text form.
//!
//! Text form is `"a"` or `"a/b"`, with an optional sign on the numerator
//! only and a strictly positive denominator.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational {input:?} at byte {position}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub position: usize,
    pub reason: &'static str,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(input: &str) -> Result<Rational, ParseRationalError> {
    let err = |position, reason| ParseRationalError {
        input: input.to_string(),
        position,
        reason,
    };
    let bytes = input.as_bytes();
    let mut pos = 0;
    if matches!(bytes.first(), Some(b'-') | Some(b'+')) {
        pos = 1;
    }
    let num_start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos == num_start {
        return Err(err(pos, "expected digit"));
    }
    let numer: BigInt = input[..pos].parse().map_err(|_| err(0, "bad numerator"))?;
    if pos == bytes.len() {
        return Ok(Rational::from_integer(numer));
    }
    if bytes[pos] != b'/' {
        return Err(err(pos, "expected '/' or end of input"));
    }
    pos += 1;
    let den_start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos == den_start {
        return Err(err(pos, "expected denominator digit"));
    }
    if pos != bytes.len() {
        return Err(err(pos, "trailing characters"));
    }
    let denom: BigInt = input[den_start..].parse().map_err(|_| err(den_start, "bad denominator"))?;
    if denom.is_zero() {
        return Err(err(den_start, "zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// `a/b` in lowest terms, or `a` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Rendering switch shared by the JSON and CSV emitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Render {
    #[default]
    Exact,
    Decimal,
}

impl Render {
    pub fn show(self, r: &Rational) -> String {
        match self {
            Render::Exact => format_rational(r),
            Render::Decimal => format!("{}", to_f64(r)),
        }
    }
}

/// Display adapter for a point of rationals, e.g. `(1, -1/2, 0)`.
pub struct PointDisplay<'a>(pub &'a [Rational]);

impl fmt::Display for PointDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

pub(crate) mod serde_rat {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

pub(crate) mod serde_rat_vec {
    use super::*;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}
