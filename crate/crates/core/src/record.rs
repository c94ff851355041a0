use serde::{Deserialize, Serialize};

/// Kind of change a commit applied to one file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChangeType {
    Add,
    Delete,
    Modify,
    Rename,
    Copy,
    Unknown,
}

/// One file touched by a commit, with the unified-diff body for that file.
///
/// Path presence follows the change type: additions have no `old_path`,
/// deletions no `new_path`, modifications carry the same path on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileModification {
    pub change_type: ChangeType,
    pub old_path: Option<String>,
    pub new_path: Option<String>,
    pub diff: String,
}

impl FileModification {
    /// Check the path/type invariants, returning the offending detail.
    pub fn check(&self) -> Result<(), String> {
        match self.change_type {
            ChangeType::Add => {
                if self.old_path.is_some() || self.new_path.is_none() {
                    return Err("add requires new_path only".into());
                }
            }
            ChangeType::Delete => {
                if self.new_path.is_some() || self.old_path.is_none() {
                    return Err("delete requires old_path only".into());
                }
            }
            ChangeType::Modify => {
                if self.old_path.is_none() || self.new_path.is_none() {
                    return Err("modify requires both paths".into());
                }
                if self.old_path != self.new_path {
                    return Err("modify requires equal paths".into());
                }
            }
            ChangeType::Rename | ChangeType::Copy => {
                if self.old_path.is_none() || self.new_path.is_none() {
                    return Err("rename/copy requires both paths".into());
                }
            }
            ChangeType::Unknown => {}
        }
        Ok(())
    }

    /// Paths touched by this modification (old and new where present).
    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.old_path
            .as_deref()
            .into_iter()
            .chain(self.new_path.as_deref())
    }
}

/// One commit: identity, authorship, message, and per-file modifications.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitRecord {
    /// Full 40-hex-char commit hash.
    pub hash: String,
    /// Repository identifier, `owner/name` where known.
    pub repo: String,
    /// Disambiguated author identifier, stable within one repo.
    pub author_id: u64,
    /// Commit time, UTC seconds.
    pub timestamp: i64,
    /// Main language of the repository.
    pub language: String,
    /// Commit message (the target text).
    pub message: String,
    /// Ordered list of file modifications (the source diff).
    pub mods: Vec<FileModification>,
}

impl CommitRecord {
    /// Validate the record invariants. Returns the offending field name and
    /// a human-readable detail on failure.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if !is_full_hex_hash(&self.hash) {
            return Err(("hash", format!("not a 40-hex-char hash: {:?}", self.hash)));
        }
        if self.timestamp <= 0 {
            return Err(("timestamp", format!("must be positive, got {}", self.timestamp)));
        }
        if self.message.is_empty() {
            return Err(("message", "must be non-empty".into()));
        }
        if self.mods.is_empty() {
            return Err(("mods", "must be non-empty".into()));
        }
        for (i, m) in self.mods.iter().enumerate() {
            m.check().map_err(|d| ("mods", format!("mods[{i}]: {d}")))?;
            if m.diff.is_empty() {
                return Err(("mods", format!("mods[{i}]: empty diff body")));
            }
        }
        Ok(())
    }
}

fn is_full_hex_hash(s: &str) -> bool {
    s.len() == 40 && s.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase())
}

/// Which split a record belongs to. Splits are disjoint by repository.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetSplit {
    Train,
    Validation,
    Test,
}

impl DatasetSplit {
    pub fn as_str(self) -> &'static str {
        match self {
            DatasetSplit::Train => "train",
            DatasetSplit::Validation => "validation",
            DatasetSplit::Test => "test",
        }
    }
}
