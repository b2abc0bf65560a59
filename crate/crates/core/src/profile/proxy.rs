use serde_json::{Map, Value};

use super::LogicalCircuitProfile;
use crate::error::{Error, Result};

const OPTIONAL_COUNTS: [&str; 4] = [
    "two_qubit_per_block",
    "remote_cnot_per_block",
    "distinct_pairs",
    "rotations_per_block",
];

/// Read a non-negative integral count. JSON documents often spell large
/// counts as floats (`8.2e8`), so integral floats are accepted.
fn count(obj: &Map<String, Value>, key: &str) -> Result<Option<u64>> {
    let Some(v) = obj.get(key) else {
        return Ok(None);
    };
    if v.is_null() {
        return Ok(None);
    }
    if let Some(u) = v.as_u64() {
        return Ok(Some(u));
    }
    if let Some(i) = v.as_i64() {
        debug_assert!(i < 0);
        return Err(Error::NegativeCount(key.to_string()));
    }
    let Some(f) = v.as_f64() else {
        return Err(Error::invalid(format!("`{key}` must be a number")));
    };
    if f < 0.0 {
        return Err(Error::NegativeCount(key.to_string()));
    }
    if !f.is_finite() || f.fract() != 0.0 || f > u64::MAX as f64 {
        return Err(Error::invalid(format!(
            "`{key}` = {f} is not an integral count"
        )));
    }
    Ok(Some(f as u64))
}

/// Build a profile from a proxy document such as
/// `{"label": "XVIII-56o", "qubits": 994, "t_total": 8.2e8}`.
///
/// Either `t_total` (taken as one pre-multiplied block) or `t_per_block`
/// (with optional `block_encodings`) must be present. Absent per-block
/// statistics default to zero and are listed in `defaulted`.
pub fn load_proxy_profile(document: &Value) -> Result<LogicalCircuitProfile> {
    let obj = document
        .as_object()
        .ok_or_else(|| Error::invalid("profile document must be a JSON object"))?;

    // Surface negative counts before reporting anything missing.
    for key in ["qubits", "t_total", "t_per_block", "block_encodings"]
        .iter()
        .chain(OPTIONAL_COUNTS.iter())
    {
        count(obj, key)?;
    }

    let qubits = count(obj, "qubits")?.ok_or_else(|| Error::MissingKey("qubits".into()))?;
    let t_total = count(obj, "t_total")?;
    let t_per_block = count(obj, "t_per_block")?;
    let block_encodings = count(obj, "block_encodings")?;

    let (t_per_block, block_encodings) = match (t_total, t_per_block, block_encodings) {
        (None, None, _) => return Err(Error::MissingKey("t_total".into())),
        (Some(total), None, None) => (total, Some(1)),
        (Some(total), None, Some(b)) => {
            if b != 1 {
                return Err(Error::invalid(
                    "`t_total` without `t_per_block` requires block_encodings = 1",
                ));
            }
            (total, Some(1))
        }
        (None, Some(per), b) => (per, b),
        (Some(total), Some(per), Some(b)) => {
            if per as u128 * b as u128 != total as u128 {
                return Err(Error::invalid(format!(
                    "t_total {total} != t_per_block {per} x block_encodings {b}"
                )));
            }
            (per, Some(b))
        }
        (Some(_), Some(_), None) => {
            return Err(Error::invalid(
                "`t_total` and `t_per_block` given without `block_encodings`",
            ))
        }
    };

    // Re-loading an emitted document keeps its record of defaulted keys.
    let mut defaulted: Vec<String> = match obj.get("defaulted") {
        Some(Value::Array(items)) => items
            .iter()
            .filter_map(|v| v.as_str().map(str::to_string))
            .collect(),
        _ => Vec::new(),
    };
    let mut opt = |key: &str| -> Result<u64> {
        Ok(match count(obj, key)? {
            Some(v) => v,
            None => {
                if !defaulted.iter().any(|k| k == key) {
                    defaulted.push(key.to_string());
                }
                0
            }
        })
    };
    let two_qubit = opt("two_qubit_per_block")?;
    let remote = opt("remote_cnot_per_block")?;
    let distinct = opt("distinct_pairs")?;
    let rotations = opt("rotations_per_block")?;

    let label = match obj.get("label") {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(Error::invalid("`label` must be a string")),
    };

    let profile = LogicalCircuitProfile {
        label,
        algorithm_logical_qubits: qubits,
        t_per_block_encoding: t_per_block,
        block_encodings,
        two_qubit_per_block: two_qubit,
        remote_cnot_per_block: remote,
        distinct_pair_count: distinct,
        rotation_count_per_block: rotations,
        defaulted,
    };
    profile.validate()?;
    Ok(profile)
}

pub fn load_proxy_profile_str(text: &str) -> Result<LogicalCircuitProfile> {
    let value: Value = serde_json::from_str(text)?;
    load_proxy_profile(&value)
}
