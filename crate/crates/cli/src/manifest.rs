//! Run manifest embedded in every emitted report, for reproducibility.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Wall-clock start, Unix seconds. Excluded from byte-identity
    /// comparisons; everything else in a report is deterministic.
    pub started_at_unix: u64,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str, inputs: Vec<String>, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            inputs,
            seed,
            started_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}
