//! Exact rationals and their string form.
//!
//! Rationals travel through JSON as `"p/q"` strings (or `"p"` for integers)
//! and are parsed from the same syntax; a leading unicode minus is accepted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Q {
    qr(1, 2)
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// The value as `i64` when it is an integer that fits.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(x: &Q) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    // Very large numerator or denominator: scale through the bit lengths.
    let shift = x.numer().bits().max(x.denom().bits()) as i64 - 60;
    let scale = |v: &BigInt| -> f64 {
        if shift > 0 {
            (v >> (shift as usize)).to_f64().unwrap_or(0.0)
        } else {
            v.to_f64().unwrap_or(0.0)
        }
    };
    scale(x.numer()) / scale(x.denom())
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let t: String = s
        .trim()
        .chars()
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .filter(|c| !c.is_whitespace())
        .collect();
    if t.is_empty() {
        return None;
    }
    let parse_int = |u: &str| -> Option<BigInt> {
        let digits = u.strip_prefix('+').unwrap_or(u);
        let body = digits.strip_prefix('-').unwrap_or(digits);
        if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        digits.parse().ok()
    };
    match t.split_once('/') {
        Some((a, b)) => {
            let n = parse_int(a)?;
            let d = parse_int(b)?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => Some(Q::from_integer(parse_int(&t)?)),
    }
}

pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn pow(x: &Q, k: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Serde adapter: a single rational as a string.
pub mod as_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_q(&raw).ok_or_else(|| serde::de::Error::custom(format!("bad rational {raw:?}")))
    }
}

/// Serde adapter: a vector of rationals as strings.
pub mod vec_as_str {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&fmt_q(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|r| {
                parse_q(r).ok_or_else(|| serde::de::Error::custom(format!("bad rational {r:?}")))
            })
            .collect()
    }
}

/// Serde adapter: a pair of rationals as a two-element string array.
pub mod pair_as_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &(Q, Q), s: S) -> Result<S::Ok, S::Error> {
        super::vec_as_str::serialize(&[x.0.clone(), x.1.clone()], s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(Q, Q), D::Error> {
        let v = super::vec_as_str::deserialize(d)?;
        if v.len() != 2 {
            return Err(serde::de::Error::custom("expected two rationals"));
        }
        Ok((v[0].clone(), v[1].clone()))
    }
}

/// Serde adapter for `Option<Q>`.
pub mod opt_as_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&fmt_q(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        match raw {
            None => Ok(None),
            Some(r) => parse_q(&r)
                .map(Some)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational {r:?}"))),
        }
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
