use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::metrics::{b_norm, edit_similarity, exact_match_prefix, Metric};

/// Which side a paired bootstrap comparison favours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    A,
    B,
    Tie,
}

/// Outcome of a paired bootstrap comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignificanceVerdict {
    pub winner: Winner,
    pub win_fraction_a: f64,
    pub win_fraction_b: f64,
    pub resamples: usize,
    pub confidence: f64,
}

/// Paired bootstrap resampling over two prediction lists sharing references.
///
/// Each resample draws indices with replacement — the same indices for both
/// sides — computes each side's corpus mean, and records which side is
/// strictly greater (exact ties count for neither). A side wins the verdict
/// only when it wins at least `confidence` of the resamples. Deterministic
/// for a given seed.
pub fn paired_bootstrap<S: AsRef<str>>(
    preds_a: &[S],
    preds_b: &[S],
    refs: &[S],
    metric: Metric,
    resamples: usize,
    confidence: f64,
    seed: u64,
) -> Result<SignificanceVerdict, EvalError> {
    if preds_a.len() != preds_b.len() || preds_a.len() != refs.len() || refs.is_empty() {
        return Err(EvalError::LengthMismatch {
            a: preds_a.len(),
            b: preds_b.len(),
            refs: refs.len(),
        });
    }
    let score = |pred: &str, refr: &str| -> f64 {
        match metric {
            Metric::BNorm => b_norm(pred, refr).value,
            Metric::EditSim => edit_similarity(pred, refr).value,
            Metric::ExactMatch => {
                if exact_match_prefix(pred, refr, None) {
                    100.0
                } else {
                    0.0
                }
            }
        }
    };
    let values_a: Vec<f64> = preds_a
        .iter()
        .zip(refs)
        .map(|(p, r)| score(p.as_ref(), r.as_ref()))
        .collect();
    let values_b: Vec<f64> = preds_b
        .iter()
        .zip(refs)
        .map(|(p, r)| score(p.as_ref(), r.as_ref()))
        .collect();

    let n = refs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wins_a = 0usize;
    let mut wins_b = 0usize;
    for _ in 0..resamples {
        let mut sum_a = 0.0;
        let mut sum_b = 0.0;
        for _ in 0..n {
            let idx = rng.gen_range(0..n);
            sum_a += values_a[idx];
            sum_b += values_b[idx];
        }
        if sum_a > sum_b {
            wins_a += 1;
        } else if sum_b > sum_a {
            wins_b += 1;
        }
    }
    let win_fraction_a = wins_a as f64 / resamples as f64;
    let win_fraction_b = wins_b as f64 / resamples as f64;
    let winner = if win_fraction_a >= confidence {
        Winner::A
    } else if win_fraction_b >= confidence {
        Winner::B
    } else {
        Winner::Tie
    };
    Ok(SignificanceVerdict {
        winner,
        win_fraction_a,
        win_fraction_b,
        resamples,
        confidence,
    })
}
