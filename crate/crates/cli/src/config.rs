// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` configuration files mirroring the command-line flags.

use std::fs;
use std::path::Path;

use qmb_core::{Error, Result};

/// Entries in file order. Repeatable keys (`set`, `axis`) may appear
/// several times.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    pub entries: Vec<(String, String)>,
}

const KEYS: [&str; 15] = [
    "model",
    "set",
    "axis",
    "weight",
    "outputs",
    "out",
    "format",
    "seed",
    "threads",
    "pseudo-inverse",
    "max-iter",
    "restarts",
    "no-optimize",
    "preset",
    "grid-points",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim().trim_start_matches("--").to_string();
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::InvalidConfig(format!("line {}: unknown key `{k}`", n + 1)));
            }
            entries.push((k, v.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Last value of a scalar key.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// All values of a repeatable key, in order.
    pub fn all(&self, key: &str) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key) {
            None | Some("false") => Ok(false),
            Some("true") | Some("") => Ok(true),
            Some(v) => Err(Error::InvalidConfig(format!(
                "`{key}` expects true or false, got `{v}`"
            ))),
        }
    }
}
