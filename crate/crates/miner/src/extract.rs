use std::path::Path;
use std::process::Command;

use comet_core::{ChangeType, FileModification};

use crate::error::MinerError;
use crate::raw::{infer_language, RawCommit};

const RECORD_MARK: &str = "\u{1}\u{1}cm\u{1}\u{1}";
const FIELD_SEP: char = '\u{1f}';
const BODY_END: &str = "\u{2}\u{2}";

/// Options for commit extraction.
#[derive(Debug, Clone)]
pub struct MineOptions {
    /// Keep only commits with commit time at or after this date (UTC).
    pub since: String,
    /// Exclude commits changing more lines than this.
    pub max_changed_lines: usize,
    /// Repository language; inferred from file extensions when `None`.
    pub language: Option<String>,
}

impl Default for MineOptions {
    fn default() -> Self {
        MineOptions {
            since: "2017-01-01".into(),
            max_changed_lines: 10_000,
            language: None,
        }
    }
}

/// Extract non-merge commits from a local git repository, oldest first.
///
/// Commits earlier than `since`, merge commits, and commits changing more
/// than `max_changed_lines` lines are excluded. Author identity stays raw
/// pending disambiguation.
pub fn enumerate_commits(repo_path: &Path, options: &MineOptions) -> Result<Vec<RawCommit>, MinerError> {
    let since_epoch = parse_date(&options.since)?;
    let repo_name = repo_display_name(repo_path);
    let format = format!("{RECORD_MARK}%H{FIELD_SEP}%an{FIELD_SEP}%ae{FIELD_SEP}%ct{FIELD_SEP}%B{BODY_END}");
    let output = Command::new("git")
        .arg("-C")
        .arg(repo_path)
        .args([
            "log",
            "--topo-order",
            "--reverse",
            "--no-merges",
            "-M",
            "-C",
            "-p",
            "--no-color",
        ])
        .arg(format!("--format={format}"))
        .output()?;
    if !output.status.success() {
        return Err(MinerError::NotARepository {
            path: repo_path.display().to_string(),
            detail: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }
    let text = String::from_utf8_lossy(&output.stdout);

    let mut commits = Vec::new();
    for chunk in text.split(RECORD_MARK).skip(1) {
        let (header, patch) = chunk
            .split_once(BODY_END)
            .ok_or_else(|| MinerError::GitOutput("record missing body terminator".into()))?;
        let fields: Vec<&str> = header.splitn(5, FIELD_SEP).collect();
        let [hash, name, email, ct, body]: [&str; 5] = fields
            .try_into()
            .map_err(|_| MinerError::GitOutput("record missing fields".into()))?;
        let timestamp: i64 = ct
            .trim()
            .parse()
            .map_err(|_| MinerError::GitOutput(format!("bad commit time {ct:?}")))?;
        if timestamp < since_epoch {
            continue;
        }
        let mods = parse_patch(patch);
        let changed: usize = mods
            .iter()
            .map(|m| {
                m.diff
                    .lines()
                    .filter(|l| l.starts_with('+') || l.starts_with('-'))
                    .count()
            })
            .sum();
        if changed > options.max_changed_lines {
            continue;
        }
        commits.push(RawCommit {
            hash: hash.trim().to_lowercase(),
            repo: repo_name.clone(),
            author_name: name.to_string(),
            author_email: email.to_string(),
            timestamp,
            language: String::new(),
            message: body.trim_end_matches('\n').to_string(),
            mods,
        });
    }

    let language = match &options.language {
        Some(l) => l.clone(),
        None => {
            let paths: Vec<&str> = commits
                .iter()
                .flat_map(|c| c.mods.iter())
                .flat_map(|m| m.paths())
                .collect();
            infer_language(paths).unwrap_or_else(|| "Unknown".into())
        }
    };
    for commit in &mut commits {
        commit.language = language.clone();
    }
    Ok(commits)
}

/// Parse `YYYY-MM-DD` into UTC midnight epoch seconds.
fn parse_date(date: &str) -> Result<i64, MinerError> {
    let parsed = chrono::NaiveDate::parse_from_str(date, "%Y-%m-%d")
        .map_err(|_| MinerError::BadDate(date.to_string()))?;
    Ok(parsed
        .and_hms_opt(0, 0, 0)
        .expect("midnight is valid")
        .and_utc()
        .timestamp())
}

/// Repository display name: `owner/name` from the origin URL when
/// available, otherwise the directory name.
fn repo_display_name(repo_path: &Path) -> String {
    let origin = Command::new("git")
        .arg("-C")
        .arg(repo_path)
        .args(["remote", "get-url", "origin"])
        .output();
    if let Ok(out) = origin {
        if out.status.success() {
            let url = String::from_utf8_lossy(&out.stdout).trim().to_string();
            if let Some(name) = owner_name_from_url(&url) {
                return name;
            }
        }
    }
    repo_path
        .canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| repo_path.display().to_string())
}

fn owner_name_from_url(url: &str) -> Option<String> {
    let trimmed = url.trim_end_matches('/').trim_end_matches(".git");
    // scp-like form: git@host:owner/name
    let path = if let Some((_, rest)) = trimmed.split_once(':') {
        if rest.contains("//") {
            // scheme form: https://host/owner/name
            let after_scheme = trimmed.split_once("//")?.1;
            let (_host, path) = after_scheme.split_once('/')?;
            path
        } else {
            rest
        }
    } else {
        return None;
    };
    let segments: Vec<&str> = path.split('/').filter(|s| !s.is_empty()).collect();
    if segments.len() >= 2 {
        Some(format!(
            "{}/{}",
            segments[segments.len() - 2],
            segments[segments.len() - 1]
        ))
    } else {
        None
    }
}

/// Split a commit's patch text into per-file modifications.
///
/// Each file block starts with a `diff --git` line. The stored body is the
/// hunk content (context and +/- lines) with `@@` headers dropped;
/// mode-only, binary, and pure-rename blocks yield an empty body.
fn parse_patch(patch: &str) -> Vec<FileModification> {
    let mut mods = Vec::new();
    for block in split_file_blocks(patch) {
        if let Some(m) = parse_file_block(block) {
            mods.push(m);
        }
    }
    mods
}

fn split_file_blocks(patch: &str) -> Vec<&str> {
    let mut starts = Vec::new();
    let mut offset = 0;
    for line in patch.split_inclusive('\n') {
        if line.starts_with("diff --git ") {
            starts.push(offset);
        }
        offset += line.len();
    }
    let mut blocks = Vec::with_capacity(starts.len());
    for (i, &start) in starts.iter().enumerate() {
        let end = starts.get(i + 1).copied().unwrap_or(patch.len());
        blocks.push(&patch[start..end]);
    }
    blocks
}

fn parse_file_block(block: &str) -> Option<FileModification> {
    let mut lines = block.lines();
    let git_line = lines.next()?.strip_prefix("diff --git ")?;

    let mut change_type = ChangeType::Modify;
    let mut rename_from = None;
    let mut rename_to = None;
    let mut minus_path = None;
    let mut plus_path = None;
    let mut body_lines: Vec<&str> = Vec::new();
    let mut in_body = false;
    for line in lines {
        if in_body {
            if !line.starts_with("@@") {
                body_lines.push(line);
            }
            continue;
        }
        if line.starts_with("@@") {
            in_body = true;
            continue;
        }
        if line.starts_with("new file mode") {
            change_type = ChangeType::Add;
        } else if line.starts_with("deleted file mode") {
            change_type = ChangeType::Delete;
        } else if let Some(p) = line.strip_prefix("rename from ") {
            change_type = ChangeType::Rename;
            rename_from = Some(unquote(p));
        } else if let Some(p) = line.strip_prefix("rename to ") {
            rename_to = Some(unquote(p));
        } else if let Some(p) = line.strip_prefix("copy from ") {
            change_type = ChangeType::Copy;
            rename_from = Some(unquote(p));
        } else if let Some(p) = line.strip_prefix("copy to ") {
            rename_to = Some(unquote(p));
        } else if let Some(p) = line.strip_prefix("--- ") {
            minus_path = strip_diff_prefix(unquote(p));
        } else if let Some(p) = line.strip_prefix("+++ ") {
            plus_path = strip_diff_prefix(unquote(p));
        }
    }

    // Paths: prefer rename/copy headers, then ---/+++ lines, then the
    // `diff --git a/X b/Y` line itself (mode-only changes have only that).
    let (fallback_old, fallback_new) = parse_git_line_paths(git_line);
    let old_path = rename_from.or(minus_path).or(fallback_old);
    let new_path = rename_to.or(plus_path).or(fallback_new);

    // Binary and mode-only blocks have no `@@` hunks, so their body is
    // naturally empty.
    let diff = body_lines.join("\n");

    let m = match change_type {
        ChangeType::Add => FileModification {
            change_type,
            old_path: None,
            new_path,
            diff,
        },
        ChangeType::Delete => FileModification {
            change_type,
            old_path,
            new_path: None,
            diff,
        },
        ChangeType::Rename | ChangeType::Copy => FileModification {
            change_type,
            old_path,
            new_path,
            diff,
        },
        _ => {
            // Plain modification: both sides are the same file.
            let path = new_path.or(old_path);
            FileModification {
                change_type: ChangeType::Modify,
                old_path: path.clone(),
                new_path: path,
                diff,
            }
        }
    };
    Some(m)
}

/// Strip git's `a/` / `b/` path prefixes; `/dev/null` means no path.
fn strip_diff_prefix(path: String) -> Option<String> {
    if path == "/dev/null" {
        return None;
    }
    let stripped = path
        .strip_prefix("a/")
        .or_else(|| path.strip_prefix("b/"))
        .map(str::to_string)
        .unwrap_or(path);
    Some(stripped)
}

/// Undo git's C-style quoting for paths with special characters.
fn unquote(path: &str) -> String {
    let path = path.trim();
    if !(path.starts_with('"') && path.ends_with('"') && path.len() >= 2) {
        return path.to_string();
    }
    let inner = &path[1..path.len() - 1];
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('"') => out.push('"'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// Best-effort split of `a/X b/Y` from the `diff --git` line.
fn parse_git_line_paths(git_line: &str) -> (Option<String>, Option<String>) {
    if let Some(idx) = git_line.find(" b/") {
        let old = git_line[..idx].strip_prefix("a/").map(str::to_string);
        let new = Some(git_line[idx + 3..].trim().to_string());
        (old, new)
    } else {
        (None, None)
    }
}
