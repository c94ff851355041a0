//! Commit message cleaning.
//!
//! Messages are either discarded (empty, non-ASCII, merge/revert
//! boilerplate, trivial one-liners) or normalized: URLs, e-mail addresses,
//! and issue references are stripped and whitespace is collapsed.

use regex::{Regex, RegexSet};

use crate::error::MinerError;

/// Anchored patterns for messages that carry no reusable information.
#[derive(Debug, Clone)]
pub struct TrivialPatterns {
    set: RegexSet,
}

impl TrivialPatterns {
    /// The built-in pattern list.
    pub fn builtin() -> TrivialPatterns {
        Self::from_lines(include_str!("../assets/trivial_patterns.txt"))
            .expect("built-in trivial patterns are valid")
    }

    /// Parse patterns from text: one per line, `#` comments and blank lines
    /// ignored. Each pattern is anchored and matched case-insensitively
    /// against the whole message.
    pub fn from_lines(text: &str) -> Result<TrivialPatterns, MinerError> {
        let anchored: Vec<String> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| format!("(?i)^(?:{l})$"))
            .collect();
        let set = RegexSet::new(&anchored)
            .map_err(|e| MinerError::GitOutput(format!("bad trivial pattern: {e}")))?;
        Ok(TrivialPatterns { set })
    }

    /// Whether the whole message matches one of the patterns.
    pub fn matches(&self, message: &str) -> bool {
        self.set.is_match(message)
    }

    /// Number of patterns in the set.
    pub fn len(&self) -> usize {
        self.set.len()
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// Clean a raw commit message, or decide the commit should be dropped.
///
/// Returns `None` for messages that are empty, contain non-ASCII bytes,
/// start with `Merge ` or `Revert `, match a trivial pattern, or become
/// empty after normalization. Otherwise returns the message with URLs,
/// e-mail addresses, and issue references (`#123`, `GH-123`) removed and
/// all whitespace runs collapsed to single spaces.
pub fn clean_message(message: &str, trivial: &TrivialPatterns) -> Option<String> {
    let trimmed = message.trim();
    if trimmed.is_empty() || !trimmed.is_ascii() {
        return None;
    }
    if trimmed.starts_with("Merge ") || trimmed.starts_with("Revert ") {
        return None;
    }
    if trivial.matches(trimmed) {
        return None;
    }

    // These are compiled per call for clarity; cleaning is not a hot path
    // relative to git subprocess I/O.
    let url = Regex::new(r"https?://\S+").unwrap();
    let email = Regex::new(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}").unwrap();
    let issue_ref = Regex::new(r"(#\d+|GH-\d+)").unwrap();
    let spaces = Regex::new(r"\s+").unwrap();

    let stripped = url.replace_all(trimmed, "");
    let stripped = email.replace_all(&stripped, "");
    let stripped = issue_ref.replace_all(&stripped, "");
    let collapsed = spaces.replace_all(&stripped, " ");
    let result = collapsed.trim().to_string();
    if result.is_empty() {
        None
    } else {
        Some(result)
    }
}
