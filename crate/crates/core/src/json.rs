use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub(crate) fn parse_value(bytes: &[u8]) -> Result<Value> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Deep-merges `overrides` into `base`: objects merge key by key, every
/// other value replaces the base value.
pub(crate) fn merge(base: &mut Value, overrides: Value) {
    match (base, overrides) {
        (Value::Object(base), Value::Object(over)) => {
            for (k, v) in over {
                match base.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        base.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Applies a partial JSON document on top of `defaults`.
pub(crate) fn overlay<T: Serialize + DeserializeOwned>(defaults: &T, overrides: Value, what: &str) -> Result<T> {
    let mut merged = serde_json::to_value(defaults).expect("config serializes");
    merge(&mut merged, overrides);
    serde_json::from_value(merged).map_err(|e| Error::InvalidInput(format!("{what}: {e}")))
}
