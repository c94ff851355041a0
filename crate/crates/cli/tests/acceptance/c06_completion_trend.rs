//! Criterion 6: completion is easier than generation. On the held-out
//! desk-corpus test split (≥ 5 repositories, ≥ 2,000 commits), both the
//! retrieval and n-gram engines show strictly increasing mean EM@1 and
//! B-Norm as the revealed-context ratio goes 0% → 25% → 50%. Magnitudes
//! are reported, not asserted.

use std::collections::HashSet;
use std::time::Instant;

use comet_core::read_dataset;

use crate::support::{arg, comet};
use crate::{desk, pass};

const RATIOS: [&str; 3] = ["0", "0.25", "0.5"];

/// Run one (engine, ratio) cell through the CLI; return (EM@1, B-Norm).
fn run_cell(corpus: &desk::DeskCorpus, engine: &str, ratio: &str) -> (f64, f64) {
    let dir = corpus.scratch(&format!("c06_{engine}_{}", ratio.replace('.', "p")));
    let preds = dir.join("predictions.jsonl");
    let report = dir.join("report.json");
    let test = corpus.split("test");
    let label = format!("{engine}@{ratio}");

    let mut args: Vec<String> = [
        "complete",
        "--engine",
        engine,
        "--test",
        arg(&test),
        "--out",
        arg(&preds),
        "--index",
        arg(&corpus.index),
        "--ratio",
        ratio,
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    if engine == "ngram" {
        for extra in [
            "--vocab",
            arg(&corpus.vocab),
            "--model",
            arg(&corpus.model),
            "--beam",
            "3",
        ] {
            args.push(extra.to_string());
        }
    }
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    comet(&refs);

    comet(&[
        "evaluate",
        "--predictions",
        arg(&preds),
        "--out",
        arg(&report),
        "--label",
        &label,
    ]);
    let body = std::fs::read_to_string(&report).expect("read evaluation report");
    let json: serde_json::Value = serde_json::from_str(&body).expect("parse evaluation report");
    assert_eq!(json["label"].as_str(), Some(label.as_str()));
    let em1 = json["series"]["em"][0].as_f64().expect("series.em[0]");
    let b_norm = json["b_norm"].as_f64().expect("b_norm");
    (em1, b_norm)
}

#[test]
fn c06_completion_easier_than_generation() {
    let corpus = desk::desk();
    let started = Instant::now();

    let records = read_dataset(&corpus.split("test")).expect("read test split");
    assert!(
        records.len() >= 2_000,
        "test split too small: {} records",
        records.len()
    );
    let repos: HashSet<&str> = records.iter().map(|r| r.repo.as_str()).collect();
    assert!(repos.len() >= 5, "test split spans only {} repositories", repos.len());

    for engine in ["retrieval", "ngram"] {
        let cells: Vec<(f64, f64)> = RATIOS
            .iter()
            .map(|ratio| run_cell(corpus, engine, ratio))
            .collect();
        for (ratio, (em1, b_norm)) in RATIOS.iter().zip(&cells) {
            println!("  {engine} @ {ratio}: EM@1 {em1:.2}  B-Norm {b_norm:.2}");
        }
        for window in cells.windows(2) {
            assert!(
                window[1].0 > window[0].0,
                "{engine}: EM@1 not strictly increasing: {:?}",
                cells.iter().map(|c| c.0).collect::<Vec<_>>()
            );
            assert!(
                window[1].1 > window[0].1,
                "{engine}: B-Norm not strictly increasing: {:?}",
                cells.iter().map(|c| c.1).collect::<Vec<_>>()
            );
        }
    }

    let elapsed = started.elapsed().as_secs_f64() + corpus.build_secs;
    assert!(
        elapsed < 600.0,
        "trend run exceeded its budget: {elapsed:.1}s including corpus build"
    );
    pass(6, "completion-easier-than-generation");
}
