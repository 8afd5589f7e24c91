//! Machine-readable command reports.
//!
//! Reports carry no timestamp, so a command run twice with the same inputs and
//! seed prints identical bytes. Floats use the shortest representation that
//! parses back to the same `f64`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: CommandEcho,
    /// SHA-256 over the command echo followed by each input file's bytes.
    pub input_digest: String,
    pub results: BTreeMap<String, f64>,
    /// Numeric values paired with a closed form, when one applies.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub analytic: BTreeMap<String, Analytic>,
    pub diagnostics: BTreeMap<String, Value>,
    /// Structured output that does not fit the flat results map.
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Analytic {
    pub numeric: f64,
    pub analytic: f64,
    pub gap: f64,
}

impl Analytic {
    pub fn new(numeric: f64, analytic: f64) -> Self {
        Self {
            numeric,
            analytic,
            gap: (numeric - analytic).abs(),
        }
    }
}

impl Report {
    pub fn new(name: &str, args: Value, inputs: &[&[u8]]) -> Self {
        let command = CommandEcho {
            name: name.to_string(),
            args,
        };
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(&command).expect("echo serializes"));
        for bytes in inputs {
            // length prefix keeps file boundaries unambiguous
            hasher.update((bytes.len() as u64).to_le_bytes());
            hasher.update(bytes);
        }
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            input_digest: hex::encode(hasher.finalize()),
            results: BTreeMap::new(),
            analytic: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
            details: Value::Null,
        }
    }

    pub fn result(&mut self, key: &str, value: f64) {
        self.results.insert(key.to_string(), value);
    }

    pub fn analytic(&mut self, key: &str, numeric: f64, analytic: f64) {
        self.analytic.insert(key.to_string(), Analytic::new(numeric, analytic));
    }

    pub fn diagnostic(&mut self, key: &str, value: impl Serialize) {
        self.diagnostics
            .insert(key.to_string(), serde_json::to_value(value).expect("diagnostic serializes"));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
