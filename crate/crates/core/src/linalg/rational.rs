//! Rational scalars and their string form (`"p/q"` or `"p"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::WonderError;

/// Exact rational scalar. Always reduced, with a positive denominator.
pub type Rational = BigRational;

/// A column vector of rationals.
pub type RatVector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_vector(len: usize) -> RatVector {
    vec![Rational::zero(); len]
}

pub fn unit_vector(len: usize, i: usize) -> RatVector {
    let mut v = zero_vector(len);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn int_vector(entries: &[i64]) -> RatVector {
    entries.iter().map(|&x| rat(x)).collect()
}

/// Scales `v` so its first nonzero entry is 1. The zero vector is returned unchanged.
pub fn normalize_line(v: &[Rational]) -> RatVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let lead = lead.clone();
            v.iter().map(|x| x / &lead).collect()
        }
        None => v.to_vec(),
    }
}

/// True iff `a` and `b` are nonzero and span the same line.
pub fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    if a.len() != b.len() || is_zero_vector(a) || is_zero_vector(b) {
        return false;
    }
    normalize_line(a) == normalize_line(b)
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p/q"` or `"p"`. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, WonderError> {
    let bad = || WonderError::Parse(format!("invalid rational literal {s:?}"));
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let is_int = |x: &str| {
        let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) || !is_int(den) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(WonderError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn parse_vector(v: &[String]) -> Result<RatVector, WonderError> {
    v.iter().map(|s| parse_rational(s)).collect()
}

/// Serde adapter for `RatVector` as a list of rational strings.
pub mod serde_vector {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        format_vector(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatVector, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        parse_vector(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of `RatVector`s.
pub mod serde_vectors {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[RatVector], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| format_vector(x)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<RatVector>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|x| parse_vector(x))
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}
