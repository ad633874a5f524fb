//! Request fingerprints for cassette matching.

use crate::CompletionRequest;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Canonical text form of a JSON value: object keys sorted recursively,
/// no insignificant whitespace. Two serializations of the same data hash
/// identically regardless of key order.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_canonical(value, &mut out);
    out
}

fn write_canonical(value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort_unstable();
            out.push('{');
            for (i, key) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("string serializes"));
                out.push(':');
                write_canonical(&map[*key], out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        leaf => out.push_str(&serde_json::to_string(leaf).expect("scalar serializes")),
    }
}

/// SHA-256 hex digest of the request's canonical JSON form.
pub fn fingerprint_request(request: &CompletionRequest) -> String {
    let value = serde_json::to_value(request).expect("request serializes");
    let mut hasher = Sha256::new();
    hasher.update(canonical_json(&value).as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
