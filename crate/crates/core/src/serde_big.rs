//! Big integers travel through JSON as decimal strings.

pub mod biguint {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| D::Error::custom(format!("not a decimal integer: {s:?}")))
    }
}

pub mod opt_biguint {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_str_radix(10)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        match Option::<String>::deserialize(d)? {
            None => Ok(None),
            Some(s) => BigUint::parse_bytes(s.as_bytes(), 10)
                .map(Some)
                .ok_or_else(|| D::Error::custom(format!("not a decimal integer: {s:?}"))),
        }
    }
}

pub mod bigint {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| D::Error::custom(format!("not a decimal integer: {s:?}")))
    }
}

/// Accepts either a JSON integer or a decimal string; writes a string.
pub mod bigint_flex {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Flex {
        Num(i64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        super::bigint::serialize(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Flex::deserialize(d)? {
            Flex::Num(n) => Ok(BigInt::from(n)),
            Flex::Str(s) => BigInt::parse_bytes(s.as_bytes(), 10)
                .ok_or_else(|| D::Error::custom(format!("not a decimal integer: {s:?}"))),
        }
    }
}

/// Rationals as `"n/d"` (or `"n"` when integral); decimals accepted on input.
pub mod rational {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        crate::lfl_bounds::parse_rational(&s).map_err(D::Error::custom)
    }
}
