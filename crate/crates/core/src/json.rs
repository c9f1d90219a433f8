//! Exact rationals in JSON documents.
//!
//! Rationals are written as `"num/den"` strings. On input plain JSON
//! integers are accepted as well; floats never are.

use std::fmt;

use num_rational::BigRational;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A [`BigRational`] with the string-or-integer JSON encoding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q(pub BigRational);

impl From<BigRational> for Q {
    fn from(q: BigRational) -> Self {
        Q(q)
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct QVisitor;

impl<'de> Visitor<'de> for QVisitor {
    type Value = Q;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a string \"a/b\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
        Ok(Q(BigRational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
        Ok(Q(BigRational::from_integer(v.into())))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
        crate::parse_rational(v)
            .map(Q)
            .ok_or_else(|| E::custom(format!("not an exact rational: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }
}

/// JSON string for a rational.
pub fn q(x: &BigRational) -> serde_json::Value {
    serde_json::Value::String(x.to_string())
}

/// JSON integer when it fits in `i64`, string otherwise.
pub fn int(x: &num_bigint::BigInt) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match x.to_i64() {
        Some(v) => v.into(),
        None => serde_json::Value::String(x.to_string()),
    }
}
