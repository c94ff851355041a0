use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// Which metric a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    BNorm,
    EditSim,
    ExactMatch,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::BNorm => "b_norm",
            Metric::EditSim => "edit_sim",
            Metric::ExactMatch => "exact_match",
        }
    }
}

/// A named metric value on the 0–100 scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub metric: Metric,
    pub value: f64,
}

/// Smoothed sentence-level BLEU-4 between prediction and reference, ×100.
///
/// Both sides are lowercased and whitespace-tokenized. Every n-gram
/// precision is add-one smoothed on numerator and denominator
/// (p_n = (m_n + 1) / (c_n + 1)), combined with uniform ¼ weights and the
/// standard brevity penalty. Directional: prediction first.
pub fn b_norm(prediction: &str, reference: &str) -> MetricValue {
    let pred = prediction.to_lowercase();
    let refr = reference.to_lowercase();
    let pred: Vec<&str> = pred.split_whitespace().collect();
    let refr: Vec<&str> = refr.split_whitespace().collect();
    let value = bleu4(&pred, &refr) * 100.0;
    MetricValue {
        metric: Metric::BNorm,
        value,
    }
}

fn bleu4(pred: &[&str], refr: &[&str]) -> f64 {
    if pred.is_empty() {
        return if refr.is_empty() { 1.0 } else { 0.0 };
    }
    let mut log_sum = 0.0;
    for n in 1..=4 {
        let matches = clipped_matches(pred, refr, n);
        let total = pred.len().saturating_sub(n - 1);
        let p = (matches as f64 + 1.0) / (total as f64 + 1.0);
        log_sum += 0.25 * p.ln();
    }
    let bp = if pred.len() > refr.len() {
        1.0
    } else {
        (1.0 - refr.len() as f64 / pred.len() as f64).exp()
    };
    bp * log_sum.exp()
}

/// Count prediction n-grams that also occur in the reference, clipping each
/// distinct n-gram's contribution by its reference count.
fn clipped_matches(pred: &[&str], refr: &[&str], n: usize) -> usize {
    if pred.len() < n || refr.len() < n {
        return 0;
    }
    let mut ref_counts: HashMap<&[&str], usize> = HashMap::new();
    for gram in refr.windows(n) {
        *ref_counts.entry(gram).or_insert(0) += 1;
    }
    let mut pred_counts: HashMap<&[&str], usize> = HashMap::new();
    for gram in pred.windows(n) {
        *pred_counts.entry(gram).or_insert(0) += 1;
    }
    pred_counts
        .iter()
        .map(|(gram, &c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
        .sum()
}

/// Character-level Levenshtein similarity, ×100.
///
/// 100 × (1 − distance / max(|prediction|, |reference|, 1)); unit costs for
/// insert, delete, and substitute.
pub fn edit_similarity(prediction: &str, reference: &str) -> MetricValue {
    let a: Vec<char> = prediction.chars().collect();
    let b: Vec<char> = reference.chars().collect();
    let dist = levenshtein_chars(&a, &b);
    let denom = a.len().max(b.len()).max(1);
    MetricValue {
        metric: Metric::EditSim,
        value: 100.0 * (1.0 - dist as f64 / denom as f64),
    }
}

/// Character-level Levenshtein distance with unit costs.
pub fn levenshtein(a: &str, b: &str) -> usize {
    levenshtein_chars(&a.chars().collect::<Vec<_>>(), &b.chars().collect::<Vec<_>>())
}

fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            curr[j + 1] = sub.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// Exact match between prediction and reference.
///
/// `k = None` compares whole strings after trimming trailing whitespace.
/// `k = Some(n)` (n ≥ 1) compares the first n whitespace tokens: if either
/// side has fewer than n tokens, the sides match only when their full token
/// sequences are identical.
pub fn exact_match_prefix(prediction: &str, reference: &str, k: Option<usize>) -> bool {
    match k {
        None => prediction.trim_end() == reference.trim_end(),
        Some(k) => {
            assert!(k >= 1, "exact_match_prefix requires k >= 1");
            let p: Vec<&str> = prediction.split_whitespace().collect();
            let r: Vec<&str> = reference.split_whitespace().collect();
            if p.len() >= k && r.len() >= k {
                p[..k] == r[..k]
            } else {
                p == r
            }
        }
    }
}
