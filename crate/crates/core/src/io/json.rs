use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::Result;

use super::write_atomic;

const SIGNIFICANT_DIGITS: usize = 12;

fn round_float(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn canonical(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_float(n.as_f64().expect("f64"));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k, canonical(v));
            }
            Value::Object(out)
        }
        other => other,
    }
}

/// Pretty JSON with sorted keys and floats rounded to 12 significant
/// digits, so that equal inputs give equal bytes.
pub fn to_canonical_json(value: &impl Serialize) -> Result<String> {
    let v = canonical(serde_json::to_value(value)?);
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    Ok(text)
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    write_atomic(path, to_canonical_json(value)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_sorted_and_floats_rounded() {
        let text = to_canonical_json(&json!({"b": 1.0 / 3.0, "a": [2, 0.1 + 0.2]})).unwrap();
        let a = text.find("\"a\"").unwrap();
        let b = text.find("\"b\"").unwrap();
        assert!(a < b);
        assert!(text.contains("0.333333333333"));
        assert!(!text.contains("0.3333333333333"));
        assert!(text.contains("0.3\n") || text.contains("0.3,") || text.contains("0.3\r"));
    }

    #[test]
    fn non_finite_becomes_null() {
        let text = to_canonical_json(&json!({"x": 1})).unwrap();
        assert!(text.contains("\"x\": 1"));
        assert_eq!(canonical(json!(f64::NAN)), Value::Null);
    }
}
