//! Diff normalization.

use comet_core::FileModification;
use regex::Regex;

/// Normalize a commit's file modifications, or decide the commit should be
/// dropped.
///
/// Within each file body, runs of spaces and tabs collapse to a single
/// space (newlines are preserved). Files whose body is empty or
/// whitespace-only after collapsing are removed; if no file survives, the
/// whole commit is dropped and `None` is returned.
pub fn normalize_diff(mods: &[FileModification]) -> Option<Vec<FileModification>> {
    let blanks = Regex::new(r"[ \t]+").unwrap();
    let survivors: Vec<FileModification> = mods
        .iter()
        .filter_map(|m| {
            let collapsed = blanks.replace_all(&m.diff, " ").into_owned();
            if collapsed.trim().is_empty() {
                return None;
            }
            let mut normalized = m.clone();
            normalized.diff = collapsed;
            Some(normalized)
        })
        .collect();
    if survivors.is_empty() {
        None
    } else {
        Some(survivors)
    }
}
