//! Shared request/result types for all completion engines.

use serde::{Deserialize, Serialize};

use crate::error::EngineError;

/// Which engine produced a completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Retrieval,
    Ngram,
    Llm,
}

impl EngineKind {
    /// Stable lowercase name, matching the serialized form.
    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::Retrieval => "retrieval",
            EngineKind::Ngram => "ngram",
            EngineKind::Llm => "llm",
        }
    }
}

/// One completion task: the commit's diff, the typed message prefix, and
/// optional author history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    /// Rendered diff of the commit being described.
    pub diff_text: String,
    /// Typed message prefix, possibly empty (pure generation).
    pub prefix: String,
    /// Prior messages of the same author in the same repository,
    /// chronological (oldest first). Entries must be non-empty.
    pub history: Vec<String>,
    /// Maximum number of new tokens to produce (≥ 1).
    pub max_new_tokens: usize,
    /// Context budget per input side, in tokens.
    pub context_budget_tokens: usize,
    /// Whether history context is offered to the engine.
    pub use_history: bool,
}

impl CompletionRequest {
    /// A request with default budgets: 15 new tokens, 512 context tokens,
    /// no history.
    pub fn new(diff_text: impl Into<String>, prefix: impl Into<String>) -> CompletionRequest {
        CompletionRequest {
            diff_text: diff_text.into(),
            prefix: prefix.into(),
            history: Vec::new(),
            max_new_tokens: 15,
            context_budget_tokens: 512,
            use_history: false,
        }
    }

    /// Check the type's invariants.
    pub fn check(&self) -> Result<(), EngineError> {
        if self.max_new_tokens == 0 {
            return Err(EngineError::BadRequest("max_new_tokens must be at least 1"));
        }
        if self.history.iter().any(|h| h.is_empty()) {
            return Err(EngineError::BadRequest("history entries must be non-empty"));
        }
        Ok(())
    }
}

/// One engine's answer to a [`CompletionRequest`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionResult {
    /// The suggested continuation — text after the typed prefix.
    pub text: String,
    /// The whole message: prefix plus continuation.
    pub full_message: String,
    /// Model log-probability or retrieval similarity.
    pub score: f64,
    /// Whether the engine honored the prefix. When true, `full_message`
    /// starts with the request's prefix, character-exact.
    pub prefix_honored: bool,
    /// Which engine produced this.
    pub engine: EngineKind,
}

impl CompletionResult {
    /// Check the type's invariant against the originating request.
    pub fn check(&self, request: &CompletionRequest) -> Result<(), EngineError> {
        if self.prefix_honored && !self.full_message.starts_with(&request.prefix) {
            return Err(EngineError::BadRequest(
                "prefix_honored requires full_message to start with the prefix",
            ));
        }
        Ok(())
    }
}

/// A completion engine: anything that answers requests deterministically
/// enough to batch over a dataset.
pub trait CompletionEngine {
    /// Which engine this is.
    fn kind(&self) -> EngineKind;

    /// Complete one request.
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResult, EngineError>;
}
