//! Bag-of-words diff retrieval: exact cosine search at desk scale, a
//! random-hyperplane ANN for larger corpora, and a BLEU rerank on top.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use comet_core::{render_diff, CommitRecord};
use comet_eval::{b_norm, truncate_to_tokens};
use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::request::{CompletionEngine, CompletionRequest, CompletionResult, EngineKind};

/// Number of hash buckets for term-frequency vectors (2^18).
const BUCKET_BITS: u32 = 18;
/// Bits per ANN signature.
const SIGNATURE_BITS: u32 = 16;
/// Number of independent ANN hash tables.
const TABLE_COUNT: usize = 8;
/// Corpora below this size use exact cosine search.
pub const EXACT_SEARCH_LIMIT: usize = 50_000;
/// How many candidates the completion adaptation considers.
const COMPLETION_CANDIDATES: usize = 32;

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in bytes {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Term-frequency vector over hashed, lowercased word tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SparseVector {
    /// Sorted (bucket, count) pairs.
    terms: Vec<(u32, f32)>,
    norm: f32,
}

fn vectorize(diff: &str) -> SparseVector {
    let mut counts: BTreeMap<u32, f32> = BTreeMap::new();
    for word in diff.split_whitespace() {
        let bucket = (fnv1a64(word.to_lowercase().as_bytes()) & ((1 << BUCKET_BITS) - 1)) as u32;
        *counts.entry(bucket).or_insert(0.0) += 1.0;
    }
    let norm = counts.values().map(|v| v * v).sum::<f32>().sqrt();
    SparseVector {
        terms: counts.into_iter().collect(),
        norm,
    }
}

fn cosine(a: &SparseVector, b: &SparseVector) -> f64 {
    if a.norm == 0.0 || b.norm == 0.0 {
        return 0.0;
    }
    let mut dot = 0.0f32;
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        match a.terms[i].0.cmp(&b.terms[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dot += a.terms[i].1 * b.terms[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    f64::from(dot / (a.norm * b.norm))
}

/// SplitMix64 finalizer: avalanches all input bits into every output bit.
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic ±1 hyperplane component for (table, bit, bucket).
fn plane_sign(table: usize, bit: u32, bucket: u32) -> f32 {
    let key = (table as u64) << 56 | u64::from(bit) << 32 | u64::from(bucket);
    if mix64(key) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn signature(vector: &SparseVector, table: usize) -> u16 {
    let mut sig = 0u16;
    for bit in 0..SIGNATURE_BITS {
        let dot: f32 = vector
            .terms
            .iter()
            .map(|&(bucket, weight)| weight * plane_sign(table, bit, bucket))
            .sum();
        if dot >= 0.0 {
            sig |= 1 << bit;
        }
    }
    sig
}

/// How neighbor search is performed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStrategy {
    /// Full-scan cosine over the whole corpus.
    Exact,
    /// Random-hyperplane LSH (16 bits × 8 tables, one-bit multiprobe).
    Approximate,
}

/// Metadata kept per indexed training commit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexedCommit {
    pub message: String,
    pub diff: String,
    pub repo: String,
    pub author_id: u64,
}

/// An immutable nearest-neighbor index over training diffs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RetrievalIndex {
    entries: Vec<IndexedCommit>,
    vectors: Vec<SparseVector>,
    /// Inverted index: bucket → (doc, weight), for exact scans.
    postings: BTreeMap<u32, Vec<(u32, f32)>>,
    /// ANN tables: signature → docs; present only under `Approximate`.
    tables: Vec<BTreeMap<u16, Vec<u32>>>,
    strategy: SearchStrategy,
}

/// A training commit returned by neighbor search.
#[derive(Debug, Clone, PartialEq)]
pub struct RetrievedCandidate {
    /// Position in the training stream.
    pub train_index: usize,
    pub message: String,
    pub diff: String,
    pub repo: String,
    pub author_id: u64,
    /// Cosine similarity between query and candidate diff vectors.
    pub cosine: f64,
    /// Smoothed BLEU between candidate diff and query diff.
    pub diff_bleu: f64,
}

/// Build a retrieval index, choosing exact search for corpora under
/// [`EXACT_SEARCH_LIMIT`] records and the ANN otherwise.
pub fn build_retrieval_index(records: &[CommitRecord]) -> Result<RetrievalIndex, EngineError> {
    let strategy = if records.len() < EXACT_SEARCH_LIMIT {
        SearchStrategy::Exact
    } else {
        SearchStrategy::Approximate
    };
    build_retrieval_index_with(records, strategy)
}

/// Build a retrieval index with an explicit search strategy.
pub fn build_retrieval_index_with(
    records: &[CommitRecord],
    strategy: SearchStrategy,
) -> Result<RetrievalIndex, EngineError> {
    if records.is_empty() {
        return Err(EngineError::EmptyCorpus("retrieval index"));
    }
    let entries: Vec<IndexedCommit> = records
        .iter()
        .map(|r| IndexedCommit {
            message: r.message.clone(),
            diff: render_diff(&r.mods),
            repo: r.repo.clone(),
            author_id: r.author_id,
        })
        .collect();
    let vectors: Vec<SparseVector> = entries.iter().map(|e| vectorize(&e.diff)).collect();

    let mut postings: BTreeMap<u32, Vec<(u32, f32)>> = BTreeMap::new();
    for (doc, vector) in vectors.iter().enumerate() {
        for &(bucket, weight) in &vector.terms {
            postings.entry(bucket).or_default().push((doc as u32, weight));
        }
    }

    let tables = if strategy == SearchStrategy::Approximate {
        let mut tables: Vec<BTreeMap<u16, Vec<u32>>> = vec![BTreeMap::new(); TABLE_COUNT];
        for (doc, vector) in vectors.iter().enumerate() {
            for (t, table) in tables.iter_mut().enumerate() {
                table.entry(signature(vector, t)).or_default().push(doc as u32);
            }
        }
        tables
    } else {
        Vec::new()
    };

    Ok(RetrievalIndex {
        entries,
        vectors,
        postings,
        tables,
        strategy,
    })
}

impl RetrievalIndex {
    /// Number of indexed records.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether the index is empty (never true for a built index).
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The active search strategy.
    pub fn strategy(&self) -> SearchStrategy {
        self.strategy
    }

    /// Indexed metadata by training position.
    pub fn entry(&self, train_index: usize) -> Option<&IndexedCommit> {
        self.entries.get(train_index)
    }

    /// Top-k by cosine, ties broken by training order.
    fn search_cosine(&self, query: &SparseVector, k: usize) -> Vec<(usize, f64)> {
        let mut scored: Vec<(usize, f64)> = match self.strategy {
            SearchStrategy::Exact => self.scan_all(query),
            SearchStrategy::Approximate => {
                let candidates = self.probe_candidates(query);
                if candidates.is_empty() {
                    // Degenerate probe (e.g. empty query): fall back to a
                    // full scan rather than returning nothing.
                    self.scan_all(query)
                } else {
                    candidates
                        .into_iter()
                        .map(|doc| (doc, cosine(query, &self.vectors[doc])))
                        .collect()
                }
            }
        };
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        scored.truncate(k);
        scored
    }

    fn scan_all(&self, query: &SparseVector) -> Vec<(usize, f64)> {
        let mut dots = vec![0.0f32; self.entries.len()];
        for &(bucket, weight) in &query.terms {
            if let Some(postings) = self.postings.get(&bucket) {
                for &(doc, doc_weight) in postings {
                    dots[doc as usize] += weight * doc_weight;
                }
            }
        }
        dots.iter()
            .enumerate()
            .map(|(doc, &dot)| {
                let denominator = query.norm * self.vectors[doc].norm;
                let score = if denominator == 0.0 {
                    0.0
                } else {
                    f64::from(dot / denominator)
                };
                (doc, score)
            })
            .collect()
    }

    /// Union of table hits for the query signature and all one-bit
    /// neighbors of it (one-bit multiprobe), sorted for determinism.
    fn probe_candidates(&self, query: &SparseVector) -> Vec<usize> {
        let mut candidates: HashSet<u32> = HashSet::new();
        for (t, table) in self.tables.iter().enumerate() {
            let sig = signature(query, t);
            for probe in std::iter::once(sig).chain((0..SIGNATURE_BITS).map(|b| sig ^ (1 << b))) {
                if let Some(docs) = table.get(&probe) {
                    candidates.extend(docs.iter().copied());
                }
            }
        }
        let mut sorted: Vec<usize> = candidates.into_iter().map(|d| d as usize).collect();
        sorted.sort_unstable();
        sorted
    }

    /// Persist with a compact binary encoding.
    pub fn save(&self, path: &Path) -> Result<(), EngineError> {
        crate::persist::save(self, path)
    }

    /// Load an index persisted by [`RetrievalIndex::save`].
    pub fn load(path: &Path) -> Result<RetrievalIndex, EngineError> {
        crate::persist::load(path)
    }
}

/// Retrieve up to `k` most similar training commits for a diff.
///
/// Candidates are selected by cosine similarity (ties by training order),
/// then reranked by smoothed BLEU between the candidate diff and the
/// query diff, descending; BLEU ties fall back to training order.
pub fn retrieve_similar(index: &RetrievalIndex, diff_text: &str, k: usize) -> Vec<RetrievedCandidate> {
    let query = vectorize(diff_text);
    let hits = index.search_cosine(&query, k);
    let mut candidates: Vec<RetrievedCandidate> = hits
        .into_iter()
        .map(|(doc, cos)| {
            let entry = &index.entries[doc];
            RetrievedCandidate {
                train_index: doc,
                message: entry.message.clone(),
                diff: entry.diff.clone(),
                repo: entry.repo.clone(),
                author_id: entry.author_id,
                cosine: cos,
                diff_bleu: b_norm(&entry.diff, diff_text).value,
            }
        })
        .collect();
    candidates.sort_by(|a, b| {
        b.diff_bleu
            .partial_cmp(&a.diff_bleu)
            .unwrap()
            .then(a.train_index.cmp(&b.train_index))
    });
    candidates
}

/// Case-insensitive (ASCII) prefix test between a message and a typed
/// prefix; returns the byte length of the matched prefix in `message`.
fn match_prefix_ci(message: &str, prefix: &str) -> Option<usize> {
    let mut message_chars = message.char_indices();
    for p in prefix.chars() {
        let (_, m) = message_chars.next()?;
        if !m.eq_ignore_ascii_case(&p) {
            return None;
        }
    }
    Some(message_chars.next().map_or(message.len(), |(i, _)| i))
}

/// Complete a message by retrieval.
///
/// The top 32 reranked candidates are considered. With a non-empty
/// prefix, the best candidate whose message starts with the prefix
/// (ASCII case-insensitive) supplies the continuation, prefix honored;
/// otherwise the top candidate's message is truncated to
/// `max_new_tokens` words and the prefix is only honored when empty.
/// With `use_history`, candidates whose message appears verbatim in the
/// request history — the author's own past messages — win BLEU ties.
pub fn complete_retrieval(
    index: &RetrievalIndex,
    request: &CompletionRequest,
) -> CompletionResult {
    retrieval_suggestions(index, request, 1)
        .pop()
        .expect("an indexed corpus always yields at least one candidate")
}

/// Up to `limit` distinct ranked completions for the same request.
///
/// Prefix-honoring candidates come first in retrieval rank order; if they
/// are fewer than `limit`, top-ranked fallback messages (truncated, prefix
/// unhonored) fill the remainder. Duplicated assembled messages are
/// suppressed.
pub fn retrieval_suggestions(
    index: &RetrievalIndex,
    request: &CompletionRequest,
    limit: usize,
) -> Vec<CompletionResult> {
    let mut candidates = retrieve_similar(index, &request.diff_text, COMPLETION_CANDIDATES);
    if request.use_history && !request.history.is_empty() {
        candidates.sort_by(|a, b| {
            let a_known = request.history.iter().any(|h| h == &a.message);
            let b_known = request.history.iter().any(|h| h == &b.message);
            b.diff_bleu
                .partial_cmp(&a.diff_bleu)
                .unwrap()
                .then(b_known.cmp(&a_known))
                .then(a.train_index.cmp(&b.train_index))
        });
    }

    let mut out: Vec<CompletionResult> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    if !request.prefix.is_empty() {
        for candidate in &candidates {
            if out.len() >= limit {
                break;
            }
            if let Some(end) = match_prefix_ci(&candidate.message, &request.prefix) {
                let text = candidate.message[end..].to_string();
                let full = format!("{}{}", request.prefix, text);
                if seen.insert(full.clone()) {
                    out.push(CompletionResult {
                        full_message: full,
                        text,
                        score: candidate.cosine,
                        prefix_honored: true,
                        engine: EngineKind::Retrieval,
                    });
                }
            }
        }
    }
    for candidate in &candidates {
        if out.len() >= limit {
            break;
        }
        let text = truncate_to_tokens(&candidate.message, request.max_new_tokens).to_string();
        let full = format!("{}{}", request.prefix, text);
        if seen.insert(full.clone()) {
            out.push(CompletionResult {
                full_message: full,
                text,
                score: candidate.cosine,
                prefix_honored: request.prefix.is_empty(),
                engine: EngineKind::Retrieval,
            });
        }
    }
    out
}

/// The retrieval engine: an index plus the completion adaptation.
#[derive(Debug, Clone)]
pub struct RetrievalEngine {
    index: RetrievalIndex,
}

impl RetrievalEngine {
    pub fn new(index: RetrievalIndex) -> RetrievalEngine {
        RetrievalEngine { index }
    }

    /// Borrow the underlying index.
    pub fn index(&self) -> &RetrievalIndex {
        &self.index
    }
}

impl CompletionEngine for RetrievalEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Retrieval
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResult, EngineError> {
        Ok(complete_retrieval(&self.index, request))
    }
}
