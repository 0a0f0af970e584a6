//! Run manifests: every command writes a `<out>.manifest.json` next to its
//! primary output recording the resolved configuration, content digests of
//! all inputs, and the full output list, so any artifact can be traced to
//! the invocation that produced it and regenerated from the same inputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, serde_json::Value>,
    /// input path -> sha256 of its content
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub timestamp_utc: String,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: "fairlens".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: BTreeMap::new(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            timestamp_utc: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn config(&mut self, key: &str, value: impl Into<serde_json::Value>) -> &mut Self {
        self.config.insert(key.to_string(), value.into());
        self
    }

    pub fn input(&mut self, path: &Path) -> Result<&mut Self> {
        let bytes =
            std::fs::read(path).with_context(|| format!("hashing input {}", path.display()))?;
        let digest = Sha256::digest(&bytes);
        self.inputs
            .insert(path.display().to_string(), format!("{digest:x}"));
        Ok(self)
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(path.display().to_string());
        self
    }

    /// Writes the manifest as `<primary>.manifest.json`.
    pub fn write_for(&self, primary: &Path) -> Result<PathBuf> {
        let path = manifest_path(primary);
        std::fs::write(&path, serde_json::to_string_pretty(self)?)
            .with_context(|| format!("writing manifest {}", path.display()))?;
        Ok(path)
    }
}

pub fn manifest_path(primary: &Path) -> PathBuf {
    let mut name = primary
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    name.push_str(".manifest.json");
    primary.with_file_name(name)
}
