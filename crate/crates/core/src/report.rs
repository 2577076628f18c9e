//! Run reports for the command-line front-end.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Result of one subcommand. Keys serialize in sorted order, so two runs with
/// the same inputs give byte-identical golden output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub version: String,
    pub results: Value,
    pub timing_ms: u128,
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs: &[&[u8]], results: Value, timing_ms: u128) -> Self {
        RunReport { command, inputs_digest: digest(inputs), version: VERSION.to_string(), results, timing_ms }
    }

    /// Full report as pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Report without the timing field, for golden comparisons.
    pub fn to_golden(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timing_ms");
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}

/// SHA-256 over the inputs, each prefixed by its length.
pub fn digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for input in inputs {
        h.update((input.len() as u64).to_le_bytes());
        h.update(input);
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn golden_ignores_timing_and_sorts_keys() {
        let a = RunReport::new(vec!["x".into()], &[b"in"], json!({"z": 1, "a": 2}), 5);
        let b = RunReport::new(vec!["x".into()], &[b"in"], json!({"a": 2, "z": 1}), 900);
        assert_eq!(a.to_golden(), b.to_golden());
        assert!(!a.to_golden().contains("timing_ms"));
        assert!(a.to_golden().find("\"a\"").unwrap() < a.to_golden().find("\"z\"").unwrap());
    }

    #[test]
    fn digest_separates_inputs() {
        assert_ne!(digest(&[b"ab", b"c"]), digest(&[b"a", b"bc"]));
        assert_eq!(digest(&[]).len(), 64);
    }
}
