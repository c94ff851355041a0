//! Reporting commands: score prediction files and compare two of them.

use std::path::Path;

use comet_eval::{
    aggregate, paired_bootstrap, render_series_csv, render_table, score_example, Metric, TableRow,
    Winner,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{require_exists, CliError, CliResult};
use crate::manifest::write_manifest;
use crate::predictions::{read_predictions, PredictionRecord};

/// The JSON evaluation report written by `evaluate --out`.
#[derive(Debug, Serialize)]
struct EvaluationReport<'a> {
    label: &'a str,
    examples: usize,
    b_norm: f64,
    edit_sim: f64,
    exact_match: f64,
    series: &'a comet_eval::PrefixSeries,
}

/// Score a prediction file and print the metric table.
pub fn evaluate_cmd(
    predictions: &Path,
    out: Option<&Path>,
    csv: Option<&Path>,
    label: Option<&str>,
    config: &RunConfig,
) -> CliResult<()> {
    require_exists(predictions)?;
    let records = read_predictions(predictions)?;
    if records.is_empty() {
        return Err(CliError::data(format!(
            "no predictions in {}",
            predictions.display()
        )));
    }
    let examples: Vec<_> = records
        .iter()
        .map(|p| score_example(&p.prediction.full_message, &p.record.message))
        .collect();
    let report = aggregate(&examples)?;
    let label = label
        .map(str::to_string)
        .unwrap_or_else(|| records[0].engine.clone());
    let row = TableRow::from_report(&label, &report);
    print!("{}", render_table(&[row]));

    if let Some(path) = out {
        let body = serde_json::to_string_pretty(&EvaluationReport {
            label: &label,
            examples: report.examples,
            b_norm: report.b_norm,
            edit_sim: report.edit_sim,
            exact_match: report.exact_match,
            series: &report.series,
        })?;
        std::fs::write(path, body + "\n")?;
        write_manifest(
            "evaluate",
            config,
            serde_json::json!({ "label": label }),
            &[predictions],
            &[path],
        )?;
    }
    if let Some(path) = csv {
        std::fs::write(path, render_series_csv(&report.series))?;
    }
    Ok(())
}

/// Check that two prediction files cover the same commits in order.
fn check_aligned(a: &[PredictionRecord], b: &[PredictionRecord]) -> CliResult<()> {
    if a.len() != b.len() {
        return Err(CliError::data(format!(
            "prediction files cover different example counts: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    for (i, (left, right)) in a.iter().zip(b).enumerate() {
        if left.record.hash != right.record.hash {
            return Err(CliError::data(format!(
                "prediction files diverge at line {}: {} vs {}",
                i + 1,
                left.record.hash,
                right.record.hash
            )));
        }
    }
    Ok(())
}

/// Compare two prediction files with a paired bootstrap and print the
/// verdict as `winner=<A|B|TIE> p_a=<fraction>`.
pub fn compare_cmd(
    a_path: &Path,
    b_path: &Path,
    metric: Metric,
    resamples: usize,
    confidence: f64,
    seed: u64,
) -> CliResult<()> {
    require_exists(a_path)?;
    require_exists(b_path)?;
    let a = read_predictions(a_path)?;
    let b = read_predictions(b_path)?;
    check_aligned(&a, &b)?;
    let refs: Vec<&str> = a.iter().map(|p| p.record.message.as_str()).collect();
    let preds_a: Vec<&str> = a.iter().map(|p| p.prediction.full_message.as_str()).collect();
    let preds_b: Vec<&str> = b.iter().map(|p| p.prediction.full_message.as_str()).collect();
    let verdict = paired_bootstrap(&preds_a, &preds_b, &refs, metric, resamples, confidence, seed)?;
    let winner = match verdict.winner {
        Winner::A => "A",
        Winner::B => "B",
        Winner::Tie => "TIE",
    };
    println!("winner={winner} p_a={:.4}", verdict.win_fraction_a);
    Ok(())
}
