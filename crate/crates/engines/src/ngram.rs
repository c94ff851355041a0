//! Subword n-gram language model with stupid backoff and message-level
//! interpolation of retrieved and history auxiliaries.

use std::collections::BTreeMap;
use std::path::Path;

use comet_core::CommitRecord;
use comet_tokenize::{split_dangling, SubwordVocab, EOS, PAD, SEP, UNK};
use serde::{Deserialize, Serialize};

use crate::beam::{constrained_beam_search, SequenceScorer};
use crate::context::{build_history_context, build_model_input, HistoryContext};
use crate::error::EngineError;
use crate::request::{CompletionEngine, CompletionRequest, CompletionResult, EngineKind};
use crate::retrieval::{retrieve_similar, RetrievalIndex};

/// Stupid-backoff discount applied per shortened context.
pub const BACKOFF_DISCOUNT: f64 = 0.4;
/// Default model order (4-grams).
pub const DEFAULT_ORDER: usize = 4;
/// Neighbors blended into the retrieved auxiliary model.
pub const AUX_NEIGHBORS: usize = 5;
/// Default beam width for completion.
pub const DEFAULT_BEAM_WIDTH: usize = 5;
/// How many frequent tokens seed open-ended beam expansion.
const FREQUENT_TOKENS: usize = 64;

/// Interpolation weights over the global, retrieved, and history models.
///
/// Weights are renormalized over the components actually present, so a
/// missing auxiliary shifts its mass onto the others.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationWeights {
    pub global: f64,
    pub retrieved: f64,
    pub history: f64,
}

impl Default for InterpolationWeights {
    fn default() -> InterpolationWeights {
        InterpolationWeights {
            global: 0.5,
            retrieved: 0.3,
            history: 0.2,
        }
    }
}

impl InterpolationWeights {
    /// All weights non-negative with positive mass on the global model.
    pub fn check(&self) -> Result<(), EngineError> {
        let ok = self.global > 0.0
            && self.retrieved >= 0.0
            && self.history >= 0.0
            && self.global.is_finite()
            && self.retrieved.is_finite()
            && self.history.is_finite();
        if ok {
            Ok(())
        } else {
            Err(EngineError::BadWeights)
        }
    }
}

/// Counts of subword n-grams up to a fixed order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NgramModel {
    order: usize,
    /// `counts[k - 1]` maps each k-gram to its frequency.
    counts: Vec<BTreeMap<Vec<u32>, u64>>,
    /// Context → sorted distinct next tokens, for beam expansion.
    continuations: BTreeMap<Vec<u32>, Vec<u32>>,
    /// Highest-count unigrams (count desc, token asc), capped.
    frequent: Vec<u32>,
    total_unigrams: u64,
}

impl NgramModel {
    /// The maximum n-gram length counted.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Total number of unigram occurrences (including end markers).
    pub fn total_unigrams(&self) -> u64 {
        self.total_unigrams
    }

    /// Frequency of an exact n-gram.
    pub fn count(&self, gram: &[u32]) -> u64 {
        if gram.is_empty() || gram.len() > self.order {
            return 0;
        }
        self.counts[gram.len() - 1].get(gram).copied().unwrap_or(0)
    }

    /// Tokens observed to follow `context` (empty slice lists unigrams).
    pub fn continuations_of(&self, context: &[u32]) -> &[u32] {
        self.continuations.get(context).map_or(&[], Vec::as_slice)
    }

    /// Stupid-backoff score of `token` after `context`, in (0, 1].
    ///
    /// The longest context suffix with an observed continuation wins; each
    /// shortening multiplies by [`BACKOFF_DISCOUNT`]. A token unseen even
    /// as a unigram falls into the smoothed tail shared with the unknown
    /// marker: (count(UNK) + 1) / (total + 1).
    pub fn score(&self, context: &[u32], token: u32) -> f64 {
        let max_context = context.len().min(self.order - 1);
        let mut discount = 1.0;
        for context_len in (1..=max_context).rev() {
            let ctx = &context[context.len() - context_len..];
            let mut gram = Vec::with_capacity(context_len + 1);
            gram.extend_from_slice(ctx);
            gram.push(token);
            let numerator = self.counts[context_len].get(&gram).copied().unwrap_or(0);
            if numerator > 0 {
                let denominator = self.counts[context_len - 1][ctx];
                return discount * numerator as f64 / denominator as f64;
            }
            discount *= BACKOFF_DISCOUNT;
        }
        let unigram = self.counts[0].get(&[token][..]).copied().unwrap_or(0);
        if unigram > 0 {
            discount * unigram as f64 / self.total_unigrams as f64
        } else {
            let unk = self.counts[0].get(&[UNK][..]).copied().unwrap_or(0);
            discount * (unk + 1) as f64 / (self.total_unigrams + 1) as f64
        }
    }

    /// Persist with a compact binary encoding.
    pub fn save(&self, path: &Path) -> Result<(), EngineError> {
        crate::persist::save(self, path)
    }

    /// Load a model persisted by [`NgramModel::save`].
    pub fn load(path: &Path) -> Result<NgramModel, EngineError> {
        crate::persist::load(path)
    }
}

/// Count message n-grams over a training corpus.
///
/// Each message is encoded to subwords and terminated with the end
/// marker before counting all n-grams up to `order` (pass
/// [`DEFAULT_ORDER`] for the standard 4-gram model).
pub fn train_ngram(
    records: &[CommitRecord],
    order: usize,
    vocab: &SubwordVocab,
) -> Result<NgramModel, EngineError> {
    if order == 0 {
        return Err(EngineError::BadOrder);
    }
    train_ngram_texts(records.iter().map(|r| r.message.as_str()), order, vocab)
        .ok_or(EngineError::EmptyCorpus("n-gram model"))
}

/// Count n-grams over raw message texts; `None` when no texts are given.
pub(crate) fn train_ngram_texts<'a, I>(
    texts: I,
    order: usize,
    vocab: &SubwordVocab,
) -> Option<NgramModel>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut counts: Vec<BTreeMap<Vec<u32>, u64>> = vec![BTreeMap::new(); order];
    let mut continuations: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
    let mut seen_any = false;
    for text in texts {
        seen_any = true;
        let mut tokens = vocab.encode(text);
        tokens.push(EOS);
        for k in 1..=order {
            for window in tokens.windows(k) {
                *counts[k - 1].entry(window.to_vec()).or_insert(0) += 1;
                continuations
                    .entry(window[..k - 1].to_vec())
                    .or_default()
                    .push(window[k - 1]);
            }
        }
    }
    if !seen_any {
        return None;
    }
    for next in continuations.values_mut() {
        next.sort_unstable();
        next.dedup();
    }
    let total_unigrams = counts[0].values().sum();
    let mut by_count: Vec<(u64, u32)> = counts[0]
        .iter()
        .map(|(gram, &count)| (count, gram[0]))
        .collect();
    by_count.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let frequent = by_count
        .into_iter()
        .take(FREQUENT_TOKENS)
        .map(|(_, token)| token)
        .collect();
    Some(NgramModel {
        order,
        counts,
        continuations,
        frequent,
        total_unigrams,
    })
}

/// Interpolated stupid-backoff probability of `token` after `context`.
///
/// Weights are renormalized over the models present, so the result is a
/// convex combination of per-model scores and stays in (0, 1].
pub fn ngram_score(
    global: &NgramModel,
    retrieved: Option<&NgramModel>,
    history: Option<&NgramModel>,
    weights: &InterpolationWeights,
    context: &[u32],
    token: u32,
) -> f64 {
    let mut mass = weights.global;
    if retrieved.is_some() {
        mass += weights.retrieved;
    }
    if history.is_some() {
        mass += weights.history;
    }
    let mut score = weights.global / mass * global.score(context, token);
    if let Some(model) = retrieved {
        score += weights.retrieved / mass * model.score(context, token);
    }
    if let Some(model) = history {
        score += weights.history / mass * model.score(context, token);
    }
    score
}

/// A ready-to-query interpolation of global and auxiliary models.
pub struct NgramScorer<'a> {
    global: &'a NgramModel,
    retrieved: Option<NgramModel>,
    history: Option<NgramModel>,
    weights: InterpolationWeights,
}

impl<'a> NgramScorer<'a> {
    pub fn new(
        global: &'a NgramModel,
        retrieved: Option<NgramModel>,
        history: Option<NgramModel>,
        weights: InterpolationWeights,
    ) -> NgramScorer<'a> {
        NgramScorer {
            global,
            retrieved,
            history,
            weights,
        }
    }
}

impl SequenceScorer for NgramScorer<'_> {
    fn log_prob(&self, context: &[u32], token: u32) -> f64 {
        ngram_score(
            self.global,
            self.retrieved.as_ref(),
            self.history.as_ref(),
            &self.weights,
            context,
            token,
        )
        .ln()
    }

    fn candidates(&self, context: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        let models = [Some(self.global), self.retrieved.as_ref(), self.history.as_ref()];
        // Observed continuations of every context suffix, longest first.
        let max_context = context.len().min(self.global.order - 1);
        for context_len in (1..=max_context).rev() {
            let ctx = &context[context.len() - context_len..];
            for model in models.into_iter().flatten() {
                out.extend_from_slice(model.continuations_of(ctx));
            }
        }
        // Frequent unigrams keep the expansion open-ended, and the end
        // marker is always an option.
        for model in models.into_iter().flatten() {
            out.extend_from_slice(&model.frequent);
        }
        out.push(EOS);
        out.sort_unstable();
        out.dedup();
        out.retain(|&t| t != PAD && t != SEP && t != UNK);
        out
    }
}

/// Complete a message with the n-gram engine and default parameters.
pub fn complete_ngram(
    model: &NgramModel,
    index: &RetrievalIndex,
    request: &CompletionRequest,
    vocab: &SubwordVocab,
) -> Result<CompletionResult, EngineError> {
    complete_ngram_with(
        model,
        index,
        request,
        vocab,
        &InterpolationWeights::default(),
        DEFAULT_BEAM_WIDTH,
    )
}

/// Complete a message with explicit interpolation weights and beam width.
pub fn complete_ngram_with(
    model: &NgramModel,
    index: &RetrievalIndex,
    request: &CompletionRequest,
    vocab: &SubwordVocab,
    weights: &InterpolationWeights,
    beam_width: usize,
) -> Result<CompletionResult, EngineError> {
    request.check()?;
    weights.check()?;

    let history_context = if request.use_history {
        build_history_context(&request.history, request.context_budget_tokens, vocab)
    } else {
        HistoryContext::empty()
    };
    let input = build_model_input(request, &history_context, vocab);

    let neighbors = retrieve_similar(index, &request.diff_text, AUX_NEIGHBORS);
    let retrieved = train_ngram_texts(
        neighbors.iter().map(|c| c.message.as_str()),
        model.order(),
        vocab,
    );
    let history = if request.use_history {
        train_ngram_texts(
            request.history.iter().map(String::as_str),
            model.order(),
            vocab,
        )
    } else {
        None
    };
    let scorer = NgramScorer::new(model, retrieved, history, *weights);

    let split = split_dangling(&request.prefix);
    let constraint = format!("{}{}", split.separator, split.dangling);
    let outcome = constrained_beam_search(
        &scorer,
        &input.prompt,
        &constraint,
        beam_width,
        request.max_new_tokens,
        vocab,
    );

    // The beam text covers separator + dangling (verbatim on fallback);
    // everything past that is the continuation after the typed prefix.
    let text = outcome.text[constraint.len()..].to_string();
    Ok(CompletionResult {
        full_message: format!("{}{}", request.prefix, text),
        text,
        score: outcome.score,
        prefix_honored: outcome.honored,
        engine: EngineKind::Ngram,
    })
}

/// The n-gram engine: a trained model, its retrieval index for
/// auxiliaries, and the shared vocabulary.
pub struct NgramEngine {
    model: NgramModel,
    index: RetrievalIndex,
    vocab: SubwordVocab,
    weights: InterpolationWeights,
    beam_width: usize,
}

impl NgramEngine {
    pub fn new(model: NgramModel, index: RetrievalIndex, vocab: SubwordVocab) -> NgramEngine {
        NgramEngine {
            model,
            index,
            vocab,
            weights: InterpolationWeights::default(),
            beam_width: DEFAULT_BEAM_WIDTH,
        }
    }

    /// Override the interpolation weights.
    pub fn with_weights(mut self, weights: InterpolationWeights) -> NgramEngine {
        self.weights = weights;
        self
    }

    /// Override the beam width.
    pub fn with_beam_width(mut self, beam_width: usize) -> NgramEngine {
        self.beam_width = beam_width.max(1);
        self
    }

    /// Borrow the trained model.
    pub fn model(&self) -> &NgramModel {
        &self.model
    }
}

impl CompletionEngine for NgramEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Ngram
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResult, EngineError> {
        complete_ngram_with(
            &self.model,
            &self.index,
            request,
            &self.vocab,
            &self.weights,
            self.beam_width,
        )
    }
}
