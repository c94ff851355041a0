//! Model-building commands: the retrieval index, the subword vocabulary,
//! and the global n-gram model.

use std::path::Path;

use comet_core::{read_dataset, render_diff, CommitRecord};
use comet_engines::{build_retrieval_index, build_retrieval_index_with, train_ngram, SearchStrategy};
use comet_tokenize::SubwordVocab;

use crate::config::RunConfig;
use crate::error::{require_exists, CliResult};
use crate::manifest::write_manifest;

/// Build and persist the retrieval index from the training split.
pub fn index_cmd(
    train: &Path,
    out: &Path,
    strategy: Option<SearchStrategy>,
    config: &RunConfig,
) -> CliResult<()> {
    require_exists(train)?;
    let records = read_dataset(train)?;
    let index = match strategy {
        Some(strategy) => build_retrieval_index_with(&records, strategy)?,
        None => build_retrieval_index(&records)?,
    };
    index.save(out)?;
    eprintln!(
        "indexed {} commits ({:?} search)",
        index.len(),
        index.strategy()
    );
    write_manifest(
        "index",
        config,
        serde_json::json!({
            "strategy": strategy.map(|s| format!("{s:?}").to_lowercase()),
        }),
        &[train],
        &[out],
    )
}

/// The texts the vocabulary is trained on: every message and every
/// rendered diff, so both sides of the model input tokenize well.
pub fn vocab_corpus(records: &[CommitRecord]) -> Vec<String> {
    let mut corpus = Vec::with_capacity(records.len() * 2);
    for record in records {
        corpus.push(record.message.clone());
        corpus.push(render_diff(&record.mods));
    }
    corpus
}

/// Train and persist the subword vocabulary and the global n-gram model.
pub fn train_cmd(
    train: &Path,
    vocab_out: &Path,
    model_out: &Path,
    merges: usize,
    order: usize,
    config: &RunConfig,
) -> CliResult<()> {
    require_exists(train)?;
    let records = read_dataset(train)?;
    let vocab = SubwordVocab::train(vocab_corpus(&records), merges)?;
    vocab.save(vocab_out)?;
    let model = train_ngram(&records, order, &vocab)?;
    model.save(model_out)?;
    eprintln!(
        "trained vocabulary ({merges} merges) and {order}-gram model on {} messages",
        records.len()
    );
    write_manifest(
        "train",
        config,
        serde_json::json!({ "merges": merges, "order": order }),
        &[train],
        &[vocab_out, model_out],
    )
}
