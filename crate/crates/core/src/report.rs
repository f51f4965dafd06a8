//! Serialisable record types shared by reports and golden files.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::IntPolyQ;

/// Report schema identifier.
pub const SCHEMA: &str = "qcs-report/1";

/// An integer that serialises as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BigIntJson(pub BigInt);

impl Serialize for BigIntJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct BigIntVisitor;

impl<'de> Visitor<'de> for BigIntVisitor {
    type Value = BigIntJson;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigIntJson, E> {
        Ok(BigIntJson(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigIntJson, E> {
        Ok(BigIntJson(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigIntJson, E> {
        v.parse().map(BigIntJson).map_err(|_| E::custom(format!("bad integer {v:?}")))
    }
}

impl<'de> Deserialize<'de> for BigIntJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(BigIntVisitor)
    }
}

impl From<u128> for BigIntJson {
    fn from(x: u128) -> Self {
        BigIntJson(x.into())
    }
}

impl From<&BigInt> for BigIntJson {
    fn from(x: &BigInt) -> Self {
        BigIntJson(x.clone())
    }
}

/// Coefficients of a polynomial in `q`, constant term first.
pub fn poly_record(p: &IntPolyQ) -> Vec<BigIntJson> {
    p.coeffs().iter().map(BigIntJson::from).collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SampleRecord {
    pub prime: u64,
    pub count: BigIntJson,
}

impl SampleRecord {
    pub fn new(prime: u64, count: u128) -> Self {
        Self { prime, count: count.into() }
    }
}

/// A certified counting polynomial together with the evidence behind it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PolyRecord {
    pub e: Vec<usize>,
    pub degree_bound: usize,
    pub samples: Vec<SampleRecord>,
    pub held_out: SampleRecord,
    pub skipped_primes: Vec<u64>,
    pub polynomial: Vec<BigIntJson>,
}

/// One term `Σ_k c_k v^k · X^exponent`; `coeff` lists `[k, c_k]` pairs.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponent: Vec<i64>,
    pub coeff: Vec<(i64, BigIntJson)>,
}

/// A commutative term `c · y^exponent` (or `c · X^exponent`).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CommutativeTerm {
    pub exponent: Vec<i64>,
    pub coeff: BigIntJson,
}

/// Reference data for one mutation walk, stored in the report schema.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GoldenTable {
    pub schema: String,
    pub table: String,
    pub quiver: String,
    /// 1-based vertices.
    pub word: Vec<usize>,
    pub word_order: String,
    pub entries: Vec<GoldenEntry>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub note: String,
    /// Number of mutations applied before this entry's seed.
    pub position: usize,
    /// 1-based index of the variable.
    pub index: usize,
    pub dim_vector: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_vector: Option<Vec<i64>>,
    pub variable: Vec<TermRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_commutative: Option<Vec<CommutativeTerm>>,
}
