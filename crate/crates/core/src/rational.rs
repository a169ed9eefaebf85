//! Exact rationals and their JSON encoding.
//!
//! Every rational crosses the JSON boundary as `{"num": p, "den": q}`. Integers
//! that fit in an `i64` are written as JSON numbers, larger ones as decimal
//! strings, so round trips are bit-exact. On input a bare integer or a
//! `"p/q"` string is also accepted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Short human form: `3`, `-1/2`.
pub fn fmt(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Big(n.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt, String> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s
                .parse::<BigInt>()
                .map_err(|e| format!("bad integer {s:?}: {e}")),
        }
    }
}

/// Wire form of a rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatRepr {
    num: IntRepr,
    den: IntRepr,
}

impl From<&Rational> for RatRepr {
    fn from(r: &Rational) -> Self {
        RatRepr {
            num: IntRepr::from_big(r.numer()),
            den: IntRepr::from_big(r.denom()),
        }
    }
}

impl TryFrom<RatRepr> for Rational {
    type Error = String;

    fn try_from(r: RatRepr) -> Result<Self, String> {
        let den = r.den.to_big()?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        if den.is_negative() {
            return Err("negative denominator".into());
        }
        Ok(Rational::new(r.num.to_big()?, den))
    }
}

/// Anything accepted where a rational is read.
#[derive(Deserialize)]
#[serde(untagged)]
enum RatInput {
    Pair(RatRepr),
    Int(i64),
    Text(String),
}

impl TryFrom<RatInput> for Rational {
    type Error = String;

    fn try_from(r: RatInput) -> Result<Self, String> {
        match r {
            RatInput::Pair(p) => p.try_into(),
            RatInput::Int(v) => Ok(int(v)),
            RatInput::Text(s) => s
                .trim()
                .parse::<Rational>()
                .map_err(|e| format!("bad rational {s:?}: {e}")),
        }
    }
}

/// `#[serde(with = "rational::serde_rat")]`
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RatRepr::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let repr = RatInput::deserialize(d)?;
        Rational::try_from(repr).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<RatRepr> = v.iter().map(RatRepr::from).collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let reprs = Vec::<RatInput>::deserialize(d)?;
        reprs
            .into_iter()
            .map(|r| Rational::try_from(r).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for row-major `Vec<Vec<Rational>>`.
pub mod serde_rows {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<Vec<RatRepr>> = v
            .iter()
            .map(|row| row.iter().map(RatRepr::from).collect())
            .collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let reprs = Vec::<Vec<RatInput>>::deserialize(d)?;
        reprs
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|r| Rational::try_from(r).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
