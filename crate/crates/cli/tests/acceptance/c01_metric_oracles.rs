//! Criterion 1: the optimized metric implementations agree with naive
//! independently written oracles — Levenshtein against a full O(nm) DP
//! matrix on 1,000 random string pairs, B-Norm against a brute-force
//! smoothed-BLEU computation on 500 random token-sequence pairs.

use std::time::Instant;

use comet_eval::{b_norm, levenshtein};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pass;

/// Textbook Levenshtein with the full (n+1)×(m+1) matrix.
fn oracle_levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        dp[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let substitute = dp[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            dp[i][j] = substitute.min(dp[i - 1][j] + 1).min(dp[i][j - 1] + 1);
        }
    }
    dp[a.len()][b.len()]
}

/// Brute-force smoothed sentence BLEU-4 on lowercased word tokens, ×100.
///
/// N-gram matches are counted by linear scans over owned token vectors —
/// no hash maps, no shared code with the optimized implementation.
fn oracle_b_norm(prediction: &str, reference: &str) -> f64 {
    let pred: Vec<String> = prediction.to_lowercase().split_whitespace().map(String::from).collect();
    let refr: Vec<String> = reference.to_lowercase().split_whitespace().map(String::from).collect();
    if pred.is_empty() {
        return if refr.is_empty() { 100.0 } else { 0.0 };
    }
    let grams = |tokens: &[String], n: usize| -> Vec<Vec<String>> {
        if tokens.len() < n {
            return Vec::new();
        }
        (0..=tokens.len() - n).map(|i| tokens[i..i + n].to_vec()).collect()
    };
    let mut log_sum = 0.0;
    for n in 1..=4 {
        let pred_grams = grams(&pred, n);
        let ref_grams = grams(&refr, n);
        let mut matches = 0usize;
        let mut counted: Vec<&Vec<String>> = Vec::new();
        for gram in &pred_grams {
            if counted.contains(&gram) {
                continue;
            }
            counted.push(gram);
            let in_pred = pred_grams.iter().filter(|g| *g == gram).count();
            let in_ref = ref_grams.iter().filter(|g| *g == gram).count();
            matches += in_pred.min(in_ref);
        }
        let total = pred.len().saturating_sub(n - 1);
        log_sum += 0.25 * ((matches as f64 + 1.0) / (total as f64 + 1.0)).ln();
    }
    let brevity = if pred.len() > refr.len() {
        1.0
    } else {
        (1.0 - refr.len() as f64 / pred.len() as f64).exp()
    };
    brevity * log_sum.exp() * 100.0
}

fn random_string(rng: &mut ChaCha8Rng, max_len: usize) -> String {
    const ALPHABET: &[char] = &['a', 'b', 'c', 'd', 'e', 'x', 'Y', ' ', ' ', '0'];
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())]).collect()
}

/// Mutate a string with a few random edits, producing near-miss pairs.
fn mutate(rng: &mut ChaCha8Rng, source: &str) -> String {
    let mut chars: Vec<char> = source.chars().collect();
    for _ in 0..rng.gen_range(0..4) {
        if chars.is_empty() {
            chars.push('q');
            continue;
        }
        let at = rng.gen_range(0..chars.len());
        match rng.gen_range(0..3) {
            0 => chars[at] = 'z',
            1 => {
                chars.remove(at);
            }
            _ => chars.insert(at, 'w'),
        }
    }
    chars.into_iter().collect()
}

fn random_tokens(rng: &mut ChaCha8Rng) -> String {
    const VOCAB: &[&str] = &[
        "fix", "Fix", "parser", "bug", "add", "test", "cache", "KEY", "the", "a", "0412",
    ];
    let len = rng.gen_range(0..=12);
    (0..len)
        .map(|_| VOCAB[rng.gen_range(0..VOCAB.len())])
        .collect::<Vec<_>>()
        .join(" ")
}

#[test]
fn c01_metric_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);

    for case in 0..1_000 {
        let a = random_string(&mut rng, 60);
        let b = if rng.gen_bool(0.5) {
            random_string(&mut rng, 60)
        } else {
            mutate(&mut rng, &a)
        };
        assert_eq!(
            levenshtein(&a, &b),
            oracle_levenshtein(&a, &b),
            "levenshtein disagrees on case {case}: {a:?} vs {b:?}"
        );
    }

    for case in 0..500 {
        let a = random_tokens(&mut rng);
        let b = if rng.gen_bool(0.5) {
            random_tokens(&mut rng)
        } else {
            mutate(&mut rng, &a)
        };
        let fast = b_norm(&a, &b).value;
        let slow = oracle_b_norm(&a, &b);
        assert!(
            (fast - slow).abs() < 1e-9,
            "b_norm disagrees on case {case}: {a:?} vs {b:?}: {fast} != {slow}"
        );
    }

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "criterion 1 took {elapsed:.1}s, budget is 10s");
    pass(1, "metric-oracle-equivalence");
}
