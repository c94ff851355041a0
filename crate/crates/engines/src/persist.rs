//! Compact binary persistence for engine artifacts.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::EngineError;

/// Serialize a value to `path` with a compact binary encoding.
pub(crate) fn save<T: Serialize>(value: &T, path: &Path) -> Result<(), EngineError> {
    let file = File::create(path)?;
    let mut writer = BufWriter::new(file);
    bincode::serialize_into(&mut writer, value)
        .map_err(|e| EngineError::Persist(format!("write {}: {e}", path.display())))
}

/// Deserialize a value previously written by [`save`].
pub(crate) fn load<T: DeserializeOwned>(path: &Path) -> Result<T, EngineError> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    bincode::deserialize_from(reader)
        .map_err(|e| EngineError::Persist(format!("read {}: {e}", path.display())))
}
