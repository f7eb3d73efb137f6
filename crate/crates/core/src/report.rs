//! Deterministic report assembly for the CLI.
//!
//! Reports are byte-identical for identical inputs and flags: field order is
//! fixed by struct declaration, JSON object values use sorted keys, and wall
//! time is logged to stderr rather than embedded in the payload.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Digest of one input file as read.
#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// The CLI's output envelope.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub params: serde_json::Value,
    pub result: serde_json::Value,
    pub version: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(
        command: &str,
        inputs: Vec<InputDigest>,
        params: serde_json::Value,
        result: serde_json::Value,
    ) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            params,
            result,
            version: crate::VERSION.to_string(),
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Key,value rows over the flattened report. Nested keys join with `.`,
    /// array elements index numerically.
    pub fn to_csv_string(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut rows = vec![("key".to_string(), "value".to_string())];
        flatten("", &value, &mut rows);
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&csv_field(&k));
            out.push(',');
            out.push_str(&csv_field(&v));
            out.push('\n');
        }
        out
    }
}

fn flatten(prefix: &str, v: &serde_json::Value, rows: &mut Vec<(String, String)>) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, rows);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, rows);
            }
        }
        serde_json::Value::Null => rows.push((prefix.to_string(), String::new())),
        serde_json::Value::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
        serde_json::Value::Number(n) => rows.push((prefix.to_string(), n.to_string())),
        serde_json::Value::String(s) => rows.push((prefix.to_string(), s.clone())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            sha256_hex(b"hello"),
            "2cf24dba5fb0a30e26e83b2ac5b9e29e1b161e5c1fa7425e73043362938b9824"
        );
    }

    #[test]
    fn reports_are_reproducible_bytes() {
        let mk = || {
            Report::new(
                "dist",
                vec![InputDigest {
                    path: "a.json".into(),
                    sha256: sha256_hex(b"x"),
                }],
                serde_json::json!({"eps": "1/1000", "seed": 0}),
                serde_json::json!({"dist": "1/2", "dist_decimal": 0.5}),
            )
        };
        assert_eq!(mk().to_json_string(), mk().to_json_string());
        assert_eq!(mk().to_csv_string(), mk().to_csv_string());
    }

    #[test]
    fn csv_flattens_nested_values() {
        let r = Report::new(
            "pp",
            vec![],
            serde_json::json!({}),
            serde_json::json!({"list": ["a", "b"], "obj": {"x": 1}}),
        );
        let csv = r.to_csv_string();
        assert!(csv.contains("result.list.0,a\n"));
        assert!(csv.contains("result.obj.x,1\n"));
    }
}
