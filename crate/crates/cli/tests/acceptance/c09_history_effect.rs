//! Criterion 9: the history effect is measurable and reported. The harness
//! produces the full 2×2 (history × context-ratio) table with paired
//! bootstrap verdicts on the desk corpus. No direction is asserted — only
//! that the table and verdicts come out end-to-end.

use std::path::{Path, PathBuf};

use crate::support::{arg, comet};
use crate::{desk, pass};

const SLICE: usize = 300;
const RATIOS: [&str; 2] = ["0.25", "0.5"];

struct Cell {
    preds: PathBuf,
    b_norm: f64,
    em1: f64,
}

fn run_cell(corpus: &desk::DeskCorpus, slice: &Path, dir: &Path, ratio: &str, history: bool) -> Cell {
    let tag = format!("h{}-r{}", u8::from(history), ratio.replace('.', "p"));
    let preds = dir.join(format!("preds-{tag}.jsonl"));
    let report = dir.join(format!("report-{tag}.json"));
    let mut args: Vec<String> = [
        "complete",
        "--engine",
        "ngram",
        "--test",
        arg(slice),
        "--out",
        arg(&preds),
        "--index",
        arg(&corpus.index),
        "--vocab",
        arg(&corpus.vocab),
        "--model",
        arg(&corpus.model),
        "--beam",
        "3",
        "--ratio",
        ratio,
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    if history {
        args.push("--history".into());
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
        &tag,
    ]);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).expect("read report"))
            .expect("parse report");
    assert_eq!(
        json["examples"].as_u64(),
        Some(SLICE as u64),
        "cell {tag} scored the wrong number of examples"
    );
    Cell {
        preds,
        b_norm: json["b_norm"].as_f64().expect("b_norm"),
        em1: json["series"]["em"][0].as_f64().expect("series.em[0]"),
    }
}

/// Parse and sanity-check one `winner=<A|B|TIE> p_a=<fraction>` line.
fn parse_verdict(stdout: &str) -> (String, f64) {
    let line = stdout
        .lines()
        .find(|l| l.starts_with("winner="))
        .unwrap_or_else(|| panic!("no verdict line in: {stdout:?}"));
    let mut parts = line.split_whitespace();
    let winner = parts
        .next()
        .and_then(|p| p.strip_prefix("winner="))
        .expect("winner field")
        .to_string();
    assert!(
        ["A", "B", "TIE"].contains(&winner.as_str()),
        "unexpected winner: {winner:?}"
    );
    let p_a: f64 = parts
        .next()
        .and_then(|p| p.strip_prefix("p_a="))
        .expect("p_a field")
        .parse()
        .expect("p_a parses");
    assert!((0.0..=1.0).contains(&p_a), "p_a out of range: {p_a}");
    (winner, p_a)
}

#[test]
fn c09_history_effect_reported() {
    let corpus = desk::desk();
    let dir = corpus.scratch("c09");

    let test = std::fs::read_to_string(corpus.split("test")).expect("read test split");
    let head: Vec<&str> = test.lines().filter(|l| !l.trim().is_empty()).take(SLICE).collect();
    assert_eq!(head.len(), SLICE);
    let slice = dir.join("slice.jsonl");
    std::fs::write(&slice, head.join("\n") + "\n").expect("write slice");

    println!("  history × ratio on {SLICE} held-out commits (n-gram engine):");
    for ratio in RATIOS {
        let off = run_cell(corpus, &slice, &dir, ratio, false);
        let on = run_cell(corpus, &slice, &dir, ratio, true);
        let output = comet(&[
            "compare",
            arg(&off.preds),
            arg(&on.preds),
            "--metric",
            "b-norm",
            "--seed",
            "17",
        ]);
        let stdout = String::from_utf8_lossy(&output.stdout).into_owned();
        let (winner, p_a) = parse_verdict(&stdout);
        println!(
            "    ratio {ratio}: no-history B-Norm {:.2} EM@1 {:.2} | history B-Norm {:.2} EM@1 {:.2} | winner={winner} p_a={p_a:.4}",
            off.b_norm, off.em1, on.b_norm, on.em1
        );
    }
    pass(9, "history-effect-reported");
}
