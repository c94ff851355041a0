use serde::{Deserialize, Serialize};

use crate::metrics::{b_norm, edit_similarity, exact_match_prefix};

/// Token counts at which each metric is reported in the prefix series.
pub const EM_KS: [usize; 2] = [1, 2];
pub const B_NORM_KS: [usize; 7] = [4, 5, 6, 7, 8, 9, 10];
pub const EDIT_SIM_KS: [usize; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

/// One example's prefix-series contributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefixSeriesExample {
    /// Exact match over the first 1 and 2 tokens.
    pub em: [bool; 2],
    /// B-Norm between 4..=10-token truncations.
    pub b_norm: [f64; 7],
    /// Edit similarity between 1..=10-token truncations.
    pub edit_sim: [f64; 10],
}

/// Corpus-mean prefix series; EM points are percentages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefixSeries {
    pub em: [f64; 2],
    pub b_norm: [f64; 7],
    pub edit_sim: [f64; 10],
}

/// All metrics for one (prediction, reference) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleMetrics {
    pub b_norm: f64,
    pub edit_sim: f64,
    pub exact_match: bool,
    pub series: PrefixSeriesExample,
}

/// Slice `text` up to the end of its first `k` whitespace tokens.
///
/// Inner whitespace is preserved exactly (the cut is a byte slice of the
/// original text). With fewer than `k` tokens the slice ends at the last
/// token, i.e. trailing whitespace never survives a truncation.
pub fn truncate_to_tokens(text: &str, k: usize) -> &str {
    if k == 0 {
        return "";
    }
    let mut count = 0;
    let mut in_token = false;
    let mut last_end = 0;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if in_token {
                in_token = false;
                if count == k {
                    return &text[..i];
                }
            }
        } else {
            if !in_token {
                in_token = true;
                count += 1;
            }
            last_end = i + c.len_utf8();
        }
    }
    &text[..last_end]
}

/// Compute the full metric set for one prediction against its reference.
pub fn score_example(prediction: &str, reference: &str) -> ExampleMetrics {
    let mut em = [false; 2];
    for (slot, k) in em.iter_mut().zip(EM_KS) {
        *slot = exact_match_prefix(prediction, reference, Some(k));
    }
    let mut bn = [0.0; 7];
    for (slot, k) in bn.iter_mut().zip(B_NORM_KS) {
        *slot = b_norm(truncate_to_tokens(prediction, k), truncate_to_tokens(reference, k)).value;
    }
    let mut es = [0.0; 10];
    for (slot, k) in es.iter_mut().zip(EDIT_SIM_KS) {
        *slot = edit_similarity(truncate_to_tokens(prediction, k), truncate_to_tokens(reference, k))
            .value;
    }
    ExampleMetrics {
        b_norm: b_norm(prediction, reference).value,
        edit_sim: edit_similarity(prediction, reference).value,
        exact_match: exact_match_prefix(prediction, reference, None),
        series: PrefixSeriesExample {
            em,
            b_norm: bn,
            edit_sim: es,
        },
    }
}
