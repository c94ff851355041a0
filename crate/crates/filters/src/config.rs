use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::FilterError;

const BUILTIN_VERBS: &str = include_str!("../assets/verbs.txt");
const BUILTIN_EXTENSIONS: &str = include_str!("../assets/extensions.json");

/// Static configuration for the filter predicates: the verb lexicon, the
/// language→extension map, and the two length thresholds.
#[derive(Debug, Clone)]
pub struct FilterConfig {
    verbs: HashSet<String>,
    extensions: HashMap<String, HashSet<String>>,
    pub max_message_tokens: usize,
    pub max_diff_tokens: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self::builtin()
    }
}

impl FilterConfig {
    /// The shipped lexicon and extension map with default thresholds
    /// (30 message tokens, 100 diff tokens).
    pub fn builtin() -> Self {
        FilterConfig {
            verbs: parse_verbs(BUILTIN_VERBS),
            extensions: parse_extensions(BUILTIN_EXTENSIONS)
                .expect("shipped extension map is valid JSON"),
            max_message_tokens: 30,
            max_diff_tokens: 100,
        }
    }

    /// Load a custom verb lexicon (one verb per line, `#` comments) and
    /// extension map (JSON object: language → array of extensions).
    pub fn load(verbs_path: &Path, extensions_path: &Path) -> Result<Self, FilterError> {
        let verbs = parse_verbs(&std::fs::read_to_string(verbs_path)?);
        let extensions = parse_extensions(&std::fs::read_to_string(extensions_path)?)?;
        Ok(FilterConfig {
            verbs,
            extensions,
            max_message_tokens: 30,
            max_diff_tokens: 100,
        })
    }

    pub fn is_verb(&self, word: &str) -> bool {
        self.verbs.contains(word)
    }

    pub fn verb_count(&self) -> usize {
        self.verbs.len()
    }

    pub fn known_language(&self, language: &str) -> bool {
        self.extensions.contains_key(language)
    }

    pub fn extensions_for(&self, language: &str) -> Option<&HashSet<String>> {
        self.extensions.get(language)
    }
}

fn parse_verbs(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

fn parse_extensions(text: &str) -> Result<HashMap<String, HashSet<String>>, FilterError> {
    let raw: HashMap<String, Vec<String>> = serde_json::from_str(text)?;
    Ok(raw
        .into_iter()
        .map(|(lang, exts)| (lang, exts.into_iter().map(|e| e.to_lowercase()).collect()))
        .collect())
}
