//! Prediction files: the dataset format plus the engine's completion.
//!
//! Each line is the original commit record flattened together with the
//! completion produced for it, the engine name, the typed prefix, and the
//! context ratio that produced the prefix.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use comet_core::CommitRecord;
use comet_engines::CompletionResult;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// One dataset record with its completion attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    /// The commit this prediction is for.
    #[serde(flatten)]
    pub record: CommitRecord,
    /// The engine's completion for the typed prefix.
    pub prediction: CompletionResult,
    /// Engine name, e.g. `"ngram"`.
    pub engine: String,
    /// The prefix the engine was given.
    pub prefix: String,
    /// Fraction of the reference revealed as the prefix.
    pub context_ratio: f64,
}

/// Write predictions as JSON Lines; returns the number written.
pub fn write_predictions(path: &Path, records: &[PredictionRecord]) -> CliResult<usize> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(records.len())
}

/// Read a prediction file written by [`write_predictions`].
pub fn read_predictions(path: &Path) -> CliResult<Vec<PredictionRecord>> {
    let file = BufReader::new(std::fs::File::open(path)?);
    let mut records = Vec::new();
    for (i, line) in file.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: PredictionRecord = serde_json::from_str(&line).map_err(|e| {
            CliError::data(format!("{}:{}: bad prediction record: {e}", path.display(), i + 1))
        })?;
        records.push(record);
    }
    Ok(records)
}
