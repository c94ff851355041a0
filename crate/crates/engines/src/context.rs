//! History-context and model-input construction shared by all engines.

use comet_tokenize::{split_dangling, SubwordVocab, SEP};

use crate::request::CompletionRequest;

/// Selected author history, rendered for model consumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryContext {
    /// Included messages joined by the separator token's text, in
    /// chronological order.
    pub text: String,
    /// The same content as token ids, separator tokens included.
    pub tokens: Vec<u32>,
    /// How many history messages made the cut.
    pub included_count: usize,
}

impl HistoryContext {
    /// An empty context.
    pub fn empty() -> HistoryContext {
        HistoryContext {
            text: String::new(),
            tokens: Vec::new(),
            included_count: 0,
        }
    }
}

/// Select and render author history under a subword-token budget.
///
/// Messages are considered most-recent-first and included whenever they
/// still fit — each costs its encoded length plus one separator when it
/// is not the first inclusion; a message that would overflow the budget
/// is excluded entirely (no partial messages) without stopping the scan,
/// so the context holds as many messages as fit. The render is
/// chronological regardless of inclusion order.
pub fn build_history_context(
    history: &[String],
    budget: usize,
    vocab: &SubwordVocab,
) -> HistoryContext {
    let encoded: Vec<Vec<u32>> = history.iter().map(|m| vocab.encode(m)).collect();
    let mut included = vec![false; history.len()];
    let mut used = 0usize;
    let mut count = 0usize;
    for i in (0..history.len()).rev() {
        let cost = encoded[i].len() + usize::from(count > 0);
        if used + cost <= budget {
            included[i] = true;
            used += cost;
            count += 1;
        }
    }

    let separator = vocab.token_str(SEP).expect("separator is always in the vocabulary");
    let mut text = String::new();
    let mut tokens = Vec::with_capacity(used);
    for (i, message) in history.iter().enumerate() {
        if !included[i] {
            continue;
        }
        if !tokens.is_empty() {
            text.push_str(separator);
            tokens.push(SEP);
        }
        text.push_str(message);
        tokens.extend_from_slice(&encoded[i]);
    }
    HistoryContext {
        text,
        tokens,
        included_count: count,
    }
}

/// Token-id inputs for the decoder-style engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelInput {
    /// Encoded diff, tail-dropped to the context budget.
    pub source: Vec<u32>,
    /// Conditioning side: history ⊕ separator ⊕ encoded complete part of
    /// the prefix, capped at the context budget.
    pub prompt: Vec<u32>,
}

/// Assemble the token-level model input for a request.
///
/// The source side is the encoded diff truncated (tail dropped) to
/// `context_budget_tokens`. The prompt side is the history context, a
/// separator, and the encoded complete part of the prefix; when the
/// budget is tight, history tokens are dropped (oldest first) before the
/// prefix loses anything, and a prefix over budget on its own keeps its
/// tail — the tokens nearest the continuation point.
pub fn build_model_input(
    request: &CompletionRequest,
    history_context: &HistoryContext,
    vocab: &SubwordVocab,
) -> ModelInput {
    let budget = request.context_budget_tokens;
    let mut source = vocab.encode(&request.diff_text);
    source.truncate(budget);

    let complete_part = split_dangling(&request.prefix).complete_part;
    let mut prefix_tokens = vocab.encode(&complete_part);
    if prefix_tokens.len() > budget {
        prefix_tokens.drain(..prefix_tokens.len() - budget);
    }

    let history = &history_context.tokens;
    let mut prompt;
    if history.is_empty() || budget < prefix_tokens.len() + 2 {
        // No room for even one history token plus the separator.
        prompt = prefix_tokens;
    } else {
        let room = budget - prefix_tokens.len() - 1;
        let kept = &history[history.len().saturating_sub(room)..];
        prompt = Vec::with_capacity(kept.len() + 1 + prefix_tokens.len());
        prompt.extend_from_slice(kept);
        prompt.push(SEP);
        prompt.extend_from_slice(&prefix_tokens);
    }
    debug_assert!(prompt.len() <= budget && source.len() <= budget);
    ModelInput { source, prompt }
}
