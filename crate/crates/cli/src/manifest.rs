//! Reproducibility manifests written beside every command output.
//!
//! A manifest records the tool version, the command, the full effective
//! configuration, and every input and output path, so a run can be
//! reproduced from the manifest alone. Manifests carry no timestamps:
//! repeating a run must produce byte-identical files.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliResult;

/// What gets serialized beside a command's outputs.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    /// Always `"comet"`.
    pub tool: &'static str,
    /// Crate version at build time.
    pub version: &'static str,
    /// Subcommand that produced the outputs.
    pub command: &'a str,
    /// Full effective configuration of the run.
    pub config: &'a RunConfig,
    /// Extra command-line parameters not covered by the config file.
    pub parameters: serde_json::Value,
    /// Input paths, as given on the command line.
    pub inputs: Vec<String>,
    /// Output paths the command wrote.
    pub outputs: Vec<String>,
}

/// Where the manifest for `output` lives: `<stem>.manifest.json` beside a
/// file, or `manifest.json` inside a directory.
pub fn manifest_path(output: &Path) -> PathBuf {
    if output.is_dir() {
        return output.join("manifest.json");
    }
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".to_string());
    output.with_file_name(format!("{stem}.manifest.json"))
}

/// Write the manifest for a command run beside its first output.
pub fn write_manifest(
    command: &str,
    config: &RunConfig,
    parameters: serde_json::Value,
    inputs: &[&Path],
    outputs: &[&Path],
) -> CliResult<()> {
    let first = match outputs.first() {
        Some(path) => path,
        None => return Ok(()),
    };
    let manifest = Manifest {
        tool: "comet",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        parameters,
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    let path = manifest_path(first);
    let body = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&path, body + "\n")?;
    Ok(())
}
