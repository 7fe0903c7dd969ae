pub mod ablate;
pub mod appraise;
pub mod regress;
pub mod report;
pub mod sensitivity;
pub mod simulate;

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

pub fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Deserialises a configuration file. Schema violations name the offending key
/// path and line.
pub fn parse_toml<T: DeserializeOwned>(path: &Path, text: &str) -> CliResult<T> {
    let fail = |e: toml::de::Error, key: Option<String>| {
        let line = e
            .span()
            .map(|s| format!(" (line {})", text[..s.start.min(text.len())].matches('\n').count() + 1))
            .unwrap_or_default();
        let at = key.map(|k| format!(" at `{k}`")).unwrap_or_default();
        CliError::input(format!("{}: schema error{at}{line}: {}", path.display(), e.message()))
    };
    let de = toml::Deserializer::parse(text).map_err(|e| fail(e, None))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let key = e.path().to_string();
        fail(e.into_inner(), (key != ".").then_some(key))
    })
}

pub fn check_schema(path: &Path, version: u32) -> CliResult<()> {
    if version == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(CliError::input(format!(
            "{}: schema_version {version} is not supported (expected {SCHEMA_VERSION})",
            path.display()
        )))
    }
}
