//! Shared output conventions: 17-significant-digit floats and a metadata
//! header carried by every data file.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::Result;

/// Formats with 17 significant digits so every f64 round-trips bit-exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Version, seed and parameter echo written ahead of every data file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Metadata {
    pub fn new(command: &str, seed: Option<u64>, with_timestamp: bool) -> Self {
        let timestamp = with_timestamp.then(|| {
            SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
        });
        Metadata {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            params: BTreeMap::new(),
            timestamp,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// `# key=value` comment lines for CSV files.
    pub fn write_csv_header<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# {} {} {}", self.tool, self.version, self.command)?;
        if let Some(seed) = self.seed {
            writeln!(out, "# seed={seed}")?;
        }
        for (k, v) in &self.params {
            writeln!(out, "# {k}={v}")?;
        }
        if let Some(ts) = self.timestamp {
            writeln!(out, "# timestamp={ts}")?;
        }
        Ok(())
    }
}
