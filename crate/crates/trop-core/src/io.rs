//! The on-disk matrix format: a JSON object with `rows`, `cols` and a
//! row-major `entries` array whose elements are integers, `"p/q"` rational
//! strings, or the literal string `"-inf"`. Chosen for diffability; every
//! value round-trips exactly.

use crate::error::{Result, TropError};
use crate::matrix::TropMatrix;
use crate::rank::Factorization;
use crate::scalar::TropScalar;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};
use std::path::Path;

fn scalar_to_json(s: &TropScalar) -> Value {
    match s {
        TropScalar::NegInf => Value::String("-inf".into()),
        TropScalar::Finite(r) => {
            if r.denom().is_one() {
                match r.numer().to_i64() {
                    Some(n) => json!(n),
                    None => Value::String(r.numer().to_string()),
                }
            } else {
                Value::String(format!("{}/{}", r.numer(), r.denom()))
            }
        }
    }
}

fn scalar_from_json(v: &Value) -> Result<TropScalar> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| TropError::Parse(format!("entry {n} is not an exact integer")))?;
            Ok(TropScalar::Finite(BigInt::from(i).into()))
        }
        Value::String(s) => s.parse(),
        other => Err(TropError::Parse(format!("unsupported entry {other}"))),
    }
}

pub fn matrix_to_json(a: &TropMatrix) -> Value {
    let entries: Vec<Value> = (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| scalar_to_json(a.get(i, j))))
        .collect();
    let mut obj = Map::new();
    obj.insert("rows".into(), json!(a.rows()));
    obj.insert("cols".into(), json!(a.cols()));
    obj.insert("entries".into(), Value::Array(entries));
    Value::Object(obj)
}

pub fn matrix_from_json(v: &Value) -> Result<TropMatrix> {
    let obj = v
        .as_object()
        .ok_or_else(|| TropError::Parse("matrix file must be a JSON object".into()))?;
    let rows = obj
        .get("rows")
        .and_then(Value::as_u64)
        .ok_or_else(|| TropError::Parse("missing or invalid \"rows\"".into()))? as usize;
    let cols = obj
        .get("cols")
        .and_then(Value::as_u64)
        .ok_or_else(|| TropError::Parse("missing or invalid \"cols\"".into()))? as usize;
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| TropError::Parse("missing \"entries\" array".into()))?;
    let parsed: Vec<TropScalar> = entries.iter().map(scalar_from_json).collect::<Result<_>>()?;
    TropMatrix::new(rows, cols, parsed)
}

pub fn parse_matrix_str(s: &str) -> Result<TropMatrix> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| TropError::Parse(format!("invalid JSON: {e}")))?;
    matrix_from_json(&v)
}

pub fn matrix_file_string(a: &TropMatrix) -> String {
    serde_json::to_string_pretty(&matrix_to_json(a)).expect("matrix serialization")
}

pub fn read_matrix(path: &Path) -> Result<TropMatrix> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| TropError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix_str(&body)
}

pub fn write_matrix(path: &Path, a: &TropMatrix) -> Result<()> {
    std::fs::write(path, matrix_file_string(a))
        .map_err(|e| TropError::Parse(format!("cannot write {}: {e}", path.display())))
}

/// A factorization file holds `{"u": <matrix>, "l": <matrix>}`.
pub fn factorization_from_json(v: &Value) -> Result<Factorization> {
    let obj = v
        .as_object()
        .ok_or_else(|| TropError::Parse("factorization file must be a JSON object".into()))?;
    let u = matrix_from_json(
        obj.get("u")
            .ok_or_else(|| TropError::Parse("missing \"u\"".into()))?,
    )?;
    let l = matrix_from_json(
        obj.get("l")
            .ok_or_else(|| TropError::Parse("missing \"l\"".into()))?,
    )?;
    Factorization::new(u, l)
}

pub fn read_factorization(path: &Path) -> Result<Factorization> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| TropError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let v: Value =
        serde_json::from_str(&body).map_err(|e| TropError::Parse(format!("invalid JSON: {e}")))?;
    factorization_from_json(&v)
}

pub fn factorization_file_string(fac: &Factorization) -> String {
    let mut obj = Map::new();
    obj.insert("u".into(), matrix_to_json(&fac.u));
    obj.insert("l".into(), matrix_to_json(&fac.l));
    serde_json::to_string_pretty(&Value::Object(obj)).expect("factorization serialization")
}
