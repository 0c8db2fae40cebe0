//! Optional TOML configuration.
//!
//! The `NLGBIDI_CONFIG` environment variable may point at a TOML file
//! supplying repetition-detector thresholds and extra unit synonyms:
//!
//! ```toml
//! [repetition]
//! max_period = 12
//!
//! [units]
//! furlong = ["fur", "furlongs"]
//! ```
//!
//! Everything is optional; missing pieces fall back to the built-ins.

use crate::diagnostics::{RepetitionConfig, UnitTable};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// Environment variable naming the config file.
pub const CONFIG_ENV_VAR: &str = "NLGBIDI_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config does not parse: {0}")]
    Parse(#[from] toml::de::Error),
}

/// Effective settings after merging a config file over the defaults.
#[derive(Debug, Clone, Default)]
pub struct Config {
    pub repetition: RepetitionConfig,
    pub units: UnitTable,
}

#[derive(Debug, Deserialize, Default)]
struct ConfigFile {
    #[serde(default)]
    repetition: Option<RepetitionConfig>,
    #[serde(default)]
    units: BTreeMap<String, Vec<String>>,
}

/// Parses config text, layering unit synonyms over the built-in table.
pub fn parse(text: &str) -> Result<Config, ConfigError> {
    let file: ConfigFile = toml::from_str(text)?;
    let mut units = UnitTable::built_in();
    for (canonical, synonyms) in &file.units {
        let refs: Vec<&str> = synonyms.iter().map(String::as_str).collect();
        units.add(canonical, &refs);
    }
    Ok(Config {
        repetition: file.repetition.unwrap_or_default(),
        units,
    })
}

/// Loads a config file from disk.
pub fn load_from_path(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

/// Loads the file named by `NLGBIDI_CONFIG`, or the defaults when the
/// variable is unset.
pub fn load_from_env() -> Result<Config, ConfigError> {
    match std::env::var_os(CONFIG_ENV_VAR) {
        Some(path) => load_from_path(Path::new(&path)),
        None => Ok(Config::default()),
    }
}
