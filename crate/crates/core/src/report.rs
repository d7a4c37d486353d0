//! Serialization helpers: exact big integers and high-precision decimals are
//! emitted as JSON numbers carrying every digit.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::ser::Error as _;
use serde::Serializer;

fn raw_number<S: Serializer>(digits: &str, s: S) -> Result<S::Ok, S::Error> {
    let number = serde_json::Number::from_str(digits).map_err(S::Error::custom)?;
    serde::Serialize::serialize(&number, s)
}

pub fn ser_biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    raw_number(&v.to_string(), s)
}

pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    raw_number(&v.to_string(), s)
}

pub fn ser_biguints<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    let numbers = v
        .iter()
        .map(|x| serde_json::Number::from_str(&x.to_string()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(S::Error::custom)?;
    serde::Serialize::serialize(&numbers, s)
}

/// Decimal strings (already rendered) as raw JSON numbers.
pub fn ser_decimals<S: Serializer>(v: &[String], s: S) -> Result<S::Ok, S::Error> {
    let numbers = v
        .iter()
        .map(|x| serde_json::Number::from_str(x))
        .collect::<Result<Vec<_>, _>>()
        .map_err(S::Error::custom)?;
    serde::Serialize::serialize(&numbers, s)
}
