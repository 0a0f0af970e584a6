//! Defaults file support: the `FAIRLENS_CONFIG` environment variable may
//! point to a flat JSON object mapping flag names (e.g. `"delta"`, `"step"`)
//! to default values. Explicit command-line flags always win.

use std::collections::BTreeMap;

use anyhow::{Context, Result};

pub struct Defaults {
    values: BTreeMap<String, serde_json::Value>,
}

pub const CONFIG_ENV: &str = "FAIRLENS_CONFIG";

impl Defaults {
    pub fn from_env() -> Result<Self> {
        let mut values = BTreeMap::new();
        if let Ok(path) = std::env::var(CONFIG_ENV) {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {CONFIG_ENV} file {path}"))?;
            values = serde_json::from_str(&text)
                .with_context(|| format!("parsing {CONFIG_ENV} file {path}"))?;
        }
        Ok(Defaults { values })
    }

    pub fn f64(&self, flag: Option<f64>, key: &str, fallback: f64) -> f64 {
        flag.or_else(|| self.values.get(key).and_then(|v| v.as_f64()))
            .unwrap_or(fallback)
    }

    pub fn usize(&self, flag: Option<usize>, key: &str, fallback: usize) -> usize {
        flag.or_else(|| {
            self.values
                .get(key)
                .and_then(|v| v.as_u64())
                .map(|v| v as usize)
        })
        .unwrap_or(fallback)
    }

    pub fn string(&self, flag: Option<&str>, key: &str, fallback: &str) -> String {
        flag.map(str::to_owned)
            .or_else(|| {
                self.values
                    .get(key)
                    .and_then(|v| v.as_str())
                    .map(str::to_owned)
            })
            .unwrap_or_else(|| fallback.to_string())
    }
}
