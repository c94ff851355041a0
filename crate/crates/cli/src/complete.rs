//! Batch completion: reveal a prefix of each reference message, run the
//! engine with diff and history context, and write one prediction per
//! record with the input order preserved.

use std::collections::HashMap;
use std::path::Path;

use comet_core::{read_dataset, render_diff, CommitRecord};
use comet_engines::CompletionRequest;
use comet_tokenize::take_char_prefix;
use rayon::prelude::*;

use crate::args::EngineChoice;
use crate::config::RunConfig;
use crate::engine::LoadedEngine;
use crate::error::{require_exists, CliError, CliResult};
use crate::manifest::write_manifest;
use crate::predictions::{write_predictions, PredictionRecord};

/// Build one request per record: the typed prefix is the leading
/// `ratio` of the reference, and the history is the author's earlier
/// messages within the same dataset (newest last, capped).
pub fn build_requests(
    records: &[CommitRecord],
    ratio: f64,
    use_history: bool,
    history_cap: usize,
    config: &RunConfig,
) -> CliResult<Vec<CompletionRequest>> {
    let mut past: HashMap<(String, u64), Vec<String>> = HashMap::new();
    let mut requests = Vec::with_capacity(records.len());
    for record in records {
        let prefix = take_char_prefix(&record.message, ratio)
            .map_err(|e| CliError::usage(e.to_string()))?;
        let mut request = CompletionRequest::new(render_diff(&record.mods), prefix);
        request.max_new_tokens = config.max_new_tokens;
        request.context_budget_tokens = config.context_budget_tokens;
        request.use_history = use_history;
        if use_history {
            let key = (record.repo.clone(), record.author_id);
            if let Some(messages) = past.get(&key) {
                let start = messages.len().saturating_sub(history_cap);
                request.history = messages[start..].to_vec();
            }
            past.entry(key).or_default().push(record.message.clone());
        }
        requests.push(request);
    }
    Ok(requests)
}

/// Run the engine over all requests in parallel, keeping record order.
pub fn complete_batch(
    engine: &LoadedEngine,
    choice: EngineChoice,
    records: &[CommitRecord],
    requests: &[CompletionRequest],
    ratio: f64,
) -> CliResult<Vec<PredictionRecord>> {
    records
        .par_iter()
        .zip(requests.par_iter())
        .map(|(record, request)| {
            let prediction = engine.complete(request).map_err(|e| {
                CliError::data(format!("completion failed for {}: {e}", record.hash))
            })?;
            Ok(PredictionRecord {
                record: record.clone(),
                prediction,
                engine: choice.as_str().to_string(),
                prefix: request.prefix.clone(),
                context_ratio: ratio,
            })
        })
        .collect()
}

/// The batch half of the `complete` command.
#[allow(clippy::too_many_arguments)]
pub fn complete_cmd(
    engine: &LoadedEngine,
    choice: EngineChoice,
    test: &Path,
    out: &Path,
    ratio: f64,
    use_history: bool,
    record_path: Option<&Path>,
    config: &RunConfig,
) -> CliResult<()> {
    require_exists(test)?;
    if !(0.0..=1.0).contains(&ratio) {
        return Err(CliError::usage(format!(
            "--ratio must be within [0, 1], got {ratio}"
        )));
    }
    let records = read_dataset(test)?;
    let requests = build_requests(&records, ratio, use_history, config.history_cap, config)?;
    let predictions = complete_batch(engine, choice, &records, &requests, ratio)?;
    let written = write_predictions(out, &predictions)?;
    eprintln!("completed {written} records at ratio {ratio}");
    if let Some(path) = record_path {
        engine.save_transcript(path)?;
    }
    write_manifest(
        "complete",
        config,
        serde_json::json!({
            "engine": choice.as_str(),
            "ratio": ratio,
            "use_history": use_history,
        }),
        &[test],
        &[out],
    )
}
