use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Everything needed to rerun a command and reproduce its output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: Value,
    pub seed: u64,
    pub version: String,
    pub timestamp: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, params: Value, seed: u64) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            params,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            outputs: Vec::new(),
        }
    }

    /// Single-line JSON for embedding as a CSV comment.
    pub fn csv_header(&self) -> String {
        format!("# manifest: {}\n", serde_json::to_string(self).unwrap_or_default())
    }
}

/// A JSON document carrying its manifest alongside the result.
#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub manifest: &'a RunManifest,
    pub result: T,
}
