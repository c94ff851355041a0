use std::path::Path;

use comet_core::{render_diff, CommitRecord};
use serde::{Deserialize, Serialize};

use crate::config::FilterConfig;
use crate::FilterError;

/// Outcome of every filter for one record. Each flag is a pure function of
/// the record and static configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdict {
    /// Message equals its own first sentence.
    pub first_sentence_only: bool,
    /// Message starts with a known imperative verb followed by an object.
    pub vdo: bool,
    /// Message has at most the configured token count.
    pub message_length_ok: bool,
    /// Rendered diff has at most the configured token count.
    pub diff_length_ok: bool,
    /// Every touched path has a source extension of the record's language.
    pub only_code: bool,
}

impl FilterVerdict {
    /// Evaluate all filters. A language missing from the extension map
    /// cannot be verified as code-only, so `only_code` is false for it.
    pub fn of(record: &CommitRecord, config: &FilterConfig) -> FilterVerdict {
        FilterVerdict {
            first_sentence_only: record.message == first_sentence(&record.message),
            vdo: passes_vdo(&record.message, config),
            message_length_ok: passes_message_length(&record.message, config.max_message_tokens),
            diff_length_ok: passes_diff_length(record, config.max_diff_tokens),
            only_code: passes_only_code(record, config).unwrap_or(false),
        }
    }

    /// The three-filter conjunction used for subset partitioning
    /// (message length deliberately not considered).
    pub fn fits_all(&self) -> bool {
        self.first_sentence_only && self.vdo && self.diff_length_ok
    }

    /// The three-filter complement: fails every partitioning filter.
    pub fn fits_none(&self) -> bool {
        !self.first_sentence_only && !self.vdo && !self.diff_length_ok
    }
}

/// Extract the first sentence: everything up to and including the first
/// `.`/`!`/`?` that is followed by whitespace or end of text, or up to the
/// first newline — whichever cut comes first. The whole message if neither
/// occurs.
pub fn first_sentence(message: &str) -> &str {
    let bytes = message.as_bytes();
    let mut terminator_cut = None;
    for (i, &b) in bytes.iter().enumerate() {
        if matches!(b, b'.' | b'!' | b'?') {
            let followed = match bytes.get(i + 1) {
                None => true,
                Some(&next) => next.is_ascii_whitespace(),
            };
            if followed {
                terminator_cut = Some(i + 1);
                break;
            }
        }
    }
    let newline_cut = message.find('\n');
    let cut = match (terminator_cut, newline_cut) {
        (Some(t), Some(n)) => t.min(n),
        (Some(t), None) => t,
        (None, Some(n)) => n,
        (None, None) => message.len(),
    };
    &message[..cut]
}

/// True when the message opens with a lexicon verb followed by a direct
/// object: the first token of the first sentence (lowercased, trailing
/// colons stripped) is a known verb and at least one alphanumeric-bearing
/// token follows it.
pub fn passes_vdo(message: &str, config: &FilterConfig) -> bool {
    let sentence = first_sentence(message);
    let mut tokens = sentence.split_whitespace();
    let Some(head) = tokens.next() else {
        return false;
    };
    let verb = head.to_lowercase();
    let verb = verb.trim_end_matches(':');
    if !config.is_verb(verb) {
        return false;
    }
    tokens.any(|t| t.chars().any(|c| c.is_alphanumeric()))
}

/// True when the message has at most `max_tokens` whitespace tokens.
pub fn passes_message_length(message: &str, max_tokens: usize) -> bool {
    message.split_whitespace().count() <= max_tokens
}

/// True when the rendered diff has at most `max_tokens` whitespace tokens.
pub fn passes_diff_length(record: &CommitRecord, max_tokens: usize) -> bool {
    render_diff(&record.mods).split_whitespace().count() <= max_tokens
}

/// True when every path touched by the commit carries one of the extensions
/// registered for the record's language. Errors when the language is not in
/// the extension map.
pub fn passes_only_code(record: &CommitRecord, config: &FilterConfig) -> Result<bool, FilterError> {
    let allowed = config
        .extensions_for(&record.language)
        .ok_or_else(|| FilterError::UnknownLanguage(record.language.clone()))?;
    let ok = record.mods.iter().all(|m| {
        m.paths().all(|p| {
            Path::new(p)
                .extension()
                .and_then(|e| e.to_str())
                .map(|e| allowed.contains(&e.to_lowercase()))
                .unwrap_or(false)
        })
    });
    Ok(ok)
}
