//! Serde helpers that write arbitrary-precision integers as decimal strings.
//!
//! Use with `#[serde(with = "rhb_core::bigserde")]` on `BigInt` fields, or
//! `bigserde::vec` for `Vec<BigInt>`.

use num_bigint::BigInt;
use serde::{de, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigInt, D::Error> {
    let text = String::deserialize(deserializer)?;
    parse(&text).map_err(de::Error::custom)
}

/// Strict decimal parse: optional leading `-`, then ASCII digits only.
pub fn parse(text: &str) -> Result<BigInt, String> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not a decimal integer: {text:?}"));
    }
    text.parse::<BigInt>().map_err(|e| e.to_string())
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<BigInt>, D::Error> {
        let texts = Vec::<String>::deserialize(deserializer)?;
        texts
            .iter()
            .map(|t| parse(t).map_err(de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::parse;
    use num_bigint::BigInt;

    #[test]
    fn parse_rejects_junk() {
        assert_eq!(parse("-42").unwrap(), BigInt::from(-42));
        assert_eq!(
            parse("123456789012345678901234567890").unwrap().to_string(),
            "123456789012345678901234567890"
        );
        for bad in ["", "-", "+3", "1.0", " 7", "0x10"] {
            assert!(parse(bad).is_err(), "{bad:?}");
        }
    }
}
