//! Canonical JSON rendering for reports and atlas dumps.
//!
//! Byte-identical output for equal values is a hard requirement: reports
//! are compared verbatim across runs. `serde_json` already orders object
//! keys (we build from `BTreeMap`-backed values), but its float formatting
//! is shortest-roundtrip, which can differ in exponent style across
//! platforms. This writer pins every number to one fixed format instead.

use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;

/// Serializes a value to canonical JSON: object keys sorted, every number
/// rendered as `{:.16e}` if non-integer (or integer-valued but produced as
/// a float), integers as plain decimals, two-space indentation.
pub fn to_canonical_json<S: Serialize>(value: &S) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::InvalidConfig {
        reason: format!("serialization failed: {e}"),
    })?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let x = n.as_f64().unwrap_or(f64::MAX);
                let _ = write!(out, "{x:.16e}");
            }
        }
        Value::String(s) => {
            let _ = write!(out, "{}", Value::String(s.clone()));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(out, indent + 1);
                write_value(out, item, indent + 1);
            }
            out.push('\n');
            push_indent(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(out, indent + 1);
                let _ = write!(out, "{}: ", Value::String((*key).clone()));
                write_value(out, &map[*key], indent + 1);
            }
            out.push('\n');
            push_indent(out, indent);
            out.push('}');
        }
    }
}

fn push_indent(out: &mut String, levels: usize) {
    for _ in 0..levels {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_floats_are_pinned() {
        let v = json!({"zeta": 1.5, "alpha": [1, 2.0, true], "mid": {"x": null}});
        let s = to_canonical_json(&v).unwrap();
        let alpha = s.find("\"alpha\"").unwrap();
        let mid = s.find("\"mid\"").unwrap();
        let zeta = s.find("\"zeta\"").unwrap();
        assert!(alpha < mid && mid < zeta);
        assert!(s.contains("1.5000000000000000e0"));
        // Integers stay integers.
        assert!(s.contains("\n    1,"));
        assert!(s.ends_with("}\n"));
    }

    #[test]
    fn equal_values_render_identically() {
        let a = json!({"b": 0.1, "a": [3.25]});
        let b = json!({"a": [3.25], "b": 0.1});
        assert_eq!(
            to_canonical_json(&a).unwrap(),
            to_canonical_json(&b).unwrap()
        );
    }
}
