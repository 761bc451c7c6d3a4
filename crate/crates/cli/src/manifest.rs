//! Run manifests: enough to re-run a command and check its output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    /// File path, or `-` for stdout.
    pub path: String,
    /// Absent in the copy embedded inside the output it describes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Flag name (without `--`) to value.
    pub params: BTreeMap<String, String>,
    pub precision_bits: u32,
    pub tool_version: String,
    pub outputs: Vec<OutputRecord>,
}

impl RunManifest {
    pub fn new(command: &str, params: BTreeMap<String, String>, precision_bits: u32) -> Self {
        RunManifest {
            command: command.to_owned(),
            params,
            precision_bits,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            outputs: Vec::new(),
        }
    }

    /// Command line reproducing the run (program name first).
    pub fn argv(&self) -> Vec<String> {
        let mut argv = vec![
            "eapprox".to_owned(),
            "--prec".to_owned(),
            self.precision_bits.to_string(),
            self.command.clone(),
        ];
        for (k, v) in &self.params {
            argv.push(format!("--{k}={v}"));
        }
        argv
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialization") + "\n"
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
