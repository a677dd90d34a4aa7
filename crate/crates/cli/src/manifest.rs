use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

/// Record written next to every output set: enough to re-run the command.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<&'static str>,
    /// The parsed command line.
    pub options: serde_json::Value,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, options: serde_json::Value) -> Self {
        Self {
            tool: "dars",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            inputs: Vec::new(),
            outputs: Vec::new(),
            seed: None,
            rng: None,
            options,
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        }
    }

    pub fn write(mut self, dir: &Path) -> std::io::Result<()> {
        let path = dir.join("manifest.json");
        self.outputs.push(path.clone());
        let text = serde_json::to_string_pretty(&self).map_err(std::io::Error::other)?;
        std::fs::write(path, text + "\n")
    }
}
