//! Serde helpers for `BigInt`: a JSON number when the value fits in `i64`,
//! a decimal string otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::Deserialize;
use std::fmt;

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

struct BigVisitor;

impl<'de> Visitor<'de> for BigVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        v.trim().parse().map_err(|_| E::custom(format!("bad integer `{v}`")))
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    d.deserialize_any(BigVisitor)
}

#[derive(Deserialize)]
struct Wrapped(#[serde(with = "self")] BigInt);

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            match x.to_i64() {
                Some(n) => seq.serialize_element(&n)?,
                None => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<Wrapped> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|w| w.0).collect())
    }
}

pub mod triple {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt; 3], s: S) -> Result<S::Ok, S::Error> {
        super::vec::serialize(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[BigInt; 3], D::Error> {
        let v = super::vec::deserialize(d)?;
        <[BigInt; 3]>::try_from(v).map_err(|v| de::Error::custom(format!("expected 3 integers, got {}", v.len())))
    }
}

#[cfg(test)]
mod tests {
    use serde::{Deserialize, Serialize};

    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "super")]
        x: BigInt,
        #[serde(with = "super::vec")]
        xs: Vec<BigInt>,
    }

    #[test]
    fn small_values_are_numbers_large_are_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let h = Holder {
            x: BigInt::from(-7),
            xs: vec![big.clone(), 3.into()],
        };
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"x":-7,"xs":["123456789012345678901234567890",3]}"#);
        assert_eq!(serde_json::from_str::<Holder>(&s).unwrap(), h);
    }
}
