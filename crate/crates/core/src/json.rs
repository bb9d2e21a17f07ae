//! Canonical JSON emission helpers.
//!
//! Reports and golden files must be byte-identical across runs, so all maps
//! are emitted in sorted key order (serde_json's default `Map` is a
//! `BTreeMap`) and big integers degrade to decimal strings only when they
//! do not fit in an `i64`.

use num_bigint::BigInt;
use serde_json::Value;

pub fn bigint_json(n: &BigInt) -> Value {
    match i64::try_from(n.clone()) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(n.to_string()),
    }
}

/// Serializes a value to a canonical string with sorted object keys.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serialization cannot fail")
}
