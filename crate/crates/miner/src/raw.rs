use std::collections::HashMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use comet_core::FileModification;
use serde::{Deserialize, Serialize};

use crate::error::MinerError;

/// A commit as mined from git, before pipeline processing: author identity
/// is still the raw (name, email) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawCommit {
    pub hash: String,
    pub repo: String,
    pub author_name: String,
    pub author_email: String,
    pub timestamp: i64,
    pub language: String,
    pub message: String,
    pub mods: Vec<FileModification>,
}

impl RawCommit {
    /// Identity key used for author merging: lowercased, trimmed.
    pub fn identity(&self) -> (String, String) {
        (
            self.author_name.trim().to_lowercase(),
            self.author_email.trim().to_lowercase(),
        )
    }
}

/// Infer a repository's main language from the extensions of touched paths:
/// the language claiming the most path hits wins (ties lexicographic).
/// `None` when no known extension appears.
pub fn infer_language<'a, I: IntoIterator<Item = &'a str>>(paths: I) -> Option<String> {
    let table: &[(&str, &str)] = &[
        ("c", "C"),
        ("cc", "C++"),
        ("cpp", "C++"),
        ("cs", "C#"),
        ("cxx", "C++"),
        ("dart", "Dart"),
        ("ex", "Elixir"),
        ("exs", "Elixir"),
        ("go", "Go"),
        ("groovy", "Groovy"),
        ("hpp", "C++"),
        ("java", "Java"),
        ("js", "JavaScript"),
        ("jsx", "JavaScript"),
        ("kt", "Kotlin"),
        ("kts", "Kotlin"),
        ("m", "Objective-C"),
        ("mm", "Objective-C"),
        ("nix", "Nix"),
        ("php", "PHP"),
        ("py", "Python"),
        ("rb", "Ruby"),
        ("rs", "Rust"),
        ("scala", "Scala"),
        ("sh", "Shell"),
        ("swift", "Swift"),
        ("ts", "TypeScript"),
        ("tsx", "TypeScript"),
    ];
    let lookup: HashMap<&str, &str> = table.iter().copied().collect();
    let mut votes: HashMap<&str, usize> = HashMap::new();
    for path in paths {
        if let Some(ext) = Path::new(path).extension().and_then(|e| e.to_str()) {
            if let Some(lang) = lookup.get(ext.to_lowercase().as_str()) {
                *votes.entry(lang).or_insert(0) += 1;
            }
        }
    }
    votes
        .into_iter()
        .max_by(|(la, ca), (lb, cb)| ca.cmp(cb).then_with(|| lb.cmp(la)))
        .map(|(lang, _)| lang.to_string())
}

/// Write raw commits as JSON Lines.
pub fn write_raw_dataset(path: &Path, records: &[RawCommit]) -> Result<usize, MinerError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    for record in records {
        let line = serde_json::to_string(record).expect("raw record serializes");
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(records.len())
}

/// Read raw commits from JSON Lines, skipping blank lines.
pub fn read_raw_dataset(path: &Path) -> Result<Vec<RawCommit>, MinerError> {
    let file = BufReader::new(std::fs::File::open(path)?);
    let mut records = Vec::new();
    for (i, line) in file.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RawCommit =
            serde_json::from_str(&line).map_err(|e| MinerError::BadRawRecord {
                line: i + 1,
                detail: e.to_string(),
            })?;
        records.push(record);
    }
    Ok(records)
}
