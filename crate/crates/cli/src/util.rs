//! Small shared helpers: JSON parsing with file context and byte-exact
//! output writing.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::CliError;

/// Parse JSON, attributing errors (including line/column from serde_json)
/// to the source file.
pub fn parse_json<T: DeserializeOwned>(bytes: &[u8], path: &Path) -> Result<T, CliError> {
    serde_json::from_slice(bytes)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}
