//! Exact rational scalars.
//!
//! Every coefficient and weight in the engine is a [`Rat`]: an arbitrary
//! precision fraction kept in lowest terms with a positive denominator.
//! The textual form is `p/q`, with `/q` dropped when `q = 1`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GrcError;

pub type Rat = num_rational::BigRational;

/// `p/q` as a reduced rational. Panics on `q = 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `p`, `-p`, `p/q` (whitespace tolerated around the parts).
pub fn parse_rat(s: &str) -> Result<Rat, GrcError> {
    let s = s.trim();
    let bad = || GrcError::Parse(format!("not a rational literal: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(GrcError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

pub fn fmt_rat(r: &Rat) -> String {
    // BigRational's Display already omits a unit denominator.
    r.to_string()
}

/// `Some(k)` when `r` is an integer that fits in `i64`.
pub fn as_integer(r: &Rat) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

pub fn is_nonneg_even_integer(r: &Rat) -> bool {
    matches!(as_integer(r), Some(k) if k >= 0 && k % 2 == 0)
}

pub fn sign_pow(e: u32) -> Rat {
    if e.is_multiple_of(2) {
        one()
    } else {
        -one()
    }
}

pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rat::from_integer(acc)
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rat_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&fmt_rat(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
