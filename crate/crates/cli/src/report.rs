//! Run reports: every command emits a JSON report tying its outputs to a
//! content hash of the exact input bytes.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// A reported quantity. Every metric carries its unit; dimensionless values
/// use `"1"`.
#[derive(Debug, Clone, Serialize)]
pub struct Metric {
    pub value: f64,
    pub unit: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the primary input file bytes, hex.
    pub input_digest_sha256: String,
    /// Paths of files written by the command.
    pub outputs: Vec<String>,
    /// Deterministically ordered name → value+unit map.
    pub metrics: BTreeMap<String, Metric>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, input_bytes: &[u8]) -> Self {
        RunReport {
            command: command.to_string(),
            input_digest_sha256: hex::encode(Sha256::digest(input_bytes)),
            outputs: Vec::new(),
            metrics: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn metric(&mut self, name: &str, value: f64, unit: &str) {
        self.metrics.insert(name.to_string(), Metric { value, unit: unit.to_string() });
    }

    pub fn flag(&mut self, name: &str, value: bool) {
        self.metric(name, if value { 1.0 } else { 0.0 }, "bool");
    }

    /// Serialize with a trailing newline; serde_json uses shortest
    /// round-trip float formatting, so identical reports are byte-identical.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}
