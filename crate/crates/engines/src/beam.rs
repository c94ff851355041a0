//! Prefix-constrained beam search over subword sequences.

use comet_tokenize::{SubwordVocab, EOS, PAD, SEP, UNK};

/// Supplies token scores and expansion candidates to the beam.
pub trait SequenceScorer {
    /// Natural log-probability of `token` following `context`.
    fn log_prob(&self, context: &[u32], token: u32) -> f64;

    /// Tokens worth expanding after `context`; must always offer at
    /// least the end marker.
    fn candidates(&self, context: &[u32]) -> Vec<u32>;
}

/// The outcome of a constrained decode.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamOutcome {
    /// Decoded generated text; always starts with the dangling
    /// constraint (verbatim-prepended when the constraint was unviable).
    pub text: String,
    /// Length-normalized log-probability of the returned hypothesis.
    pub score: f64,
    /// Whether the constraint was satisfied by decoding rather than by
    /// prepending it.
    pub honored: bool,
}

#[derive(Debug, Clone)]
struct Hypothesis {
    tokens: Vec<u32>,
    text: String,
    sum_log_prob: f64,
    scored: usize,
    finished: bool,
}

impl Hypothesis {
    fn root() -> Hypothesis {
        Hypothesis {
            tokens: Vec::new(),
            text: String::new(),
            sum_log_prob: 0.0,
            scored: 0,
            finished: false,
        }
    }

    /// Length-normalized log-probability (sum over scored tokens / count).
    fn normalized(&self) -> f64 {
        if self.scored == 0 {
            0.0
        } else {
            self.sum_log_prob / self.scored as f64
        }
    }
}

fn better(a: &Hypothesis, b: &Hypothesis) -> std::cmp::Ordering {
    b.normalized()
        .partial_cmp(&a.normalized())
        .expect("scores are finite")
        .then_with(|| a.tokens.cmp(&b.tokens))
}

/// Decode up to `max_new_tokens` subwords after `prompt`, constrained so
/// the generated text begins with `dangling`.
///
/// Hypotheses are pruned unless their decoded text is a prefix of
/// `dangling` or starts with it. Search keeps `beam_width` hypotheses by
/// length-normalized log-probability (width 1 is greedy), stops when all
/// beams have emitted the end marker or the budget is spent, and returns
/// the best finished hypothesis, else the best unfinished one. When no
/// hypothesis can realize the constraint, an unconstrained decode runs
/// instead and `dangling` is prepended verbatim with `honored = false`.
pub fn constrained_beam_search(
    scorer: &dyn SequenceScorer,
    prompt: &[u32],
    dangling: &str,
    beam_width: usize,
    max_new_tokens: usize,
    vocab: &SubwordVocab,
) -> BeamOutcome {
    if let Some(best) = run_beam(scorer, prompt, dangling, beam_width, max_new_tokens, vocab) {
        if best.text.starts_with(dangling) {
            let score = best.normalized();
            return BeamOutcome {
                text: best.text,
                score,
                honored: true,
            };
        }
    }
    let fallback = run_beam(scorer, prompt, "", beam_width, max_new_tokens, vocab)
        .expect("unconstrained decoding always yields a hypothesis");
    BeamOutcome {
        text: format!("{dangling}{}", fallback.text),
        score: fallback.normalized(),
        honored: dangling.is_empty(),
    }
}

fn run_beam(
    scorer: &dyn SequenceScorer,
    prompt: &[u32],
    dangling: &str,
    beam_width: usize,
    max_new_tokens: usize,
    vocab: &SubwordVocab,
) -> Option<Hypothesis> {
    let beam_width = beam_width.max(1);
    let mut beams = vec![Hypothesis::root()];
    let mut context = prompt.to_vec();
    for _ in 0..max_new_tokens {
        if beams.iter().all(|h| h.finished) {
            break;
        }
        let mut next: Vec<Hypothesis> = Vec::new();
        for hypothesis in &beams {
            if hypothesis.finished {
                next.push(hypothesis.clone());
                continue;
            }
            context.truncate(prompt.len());
            context.extend_from_slice(&hypothesis.tokens);
            for token in expansion_tokens(scorer, &context, hypothesis, dangling, vocab) {
                let log_prob = scorer.log_prob(&context, token);
                let mut expanded = hypothesis.clone();
                expanded.sum_log_prob += log_prob;
                expanded.scored += 1;
                if token == EOS {
                    expanded.finished = true;
                } else {
                    expanded.tokens.push(token);
                    expanded
                        .text
                        .push_str(vocab.token_str(token).expect("candidate ids are in-vocabulary"));
                }
                next.push(expanded);
            }
        }
        if next.is_empty() {
            // Every live hypothesis dead-ended against the constraint.
            return None;
        }
        next.sort_by(better);
        next.truncate(beam_width);
        beams = next;
    }
    beams.sort_by(|a, b| b.finished.cmp(&a.finished).then_with(|| better(a, b)));
    beams.into_iter().next()
}

/// Candidate tokens for one expansion step.
///
/// While the decoded text has not yet covered `dangling`, every
/// vocabulary token that keeps the text compatible with it is viable
/// (the end marker is not, since finishing early would violate the
/// constraint). Afterwards the scorer chooses.
fn expansion_tokens(
    scorer: &dyn SequenceScorer,
    context: &[u32],
    hypothesis: &Hypothesis,
    dangling: &str,
    vocab: &SubwordVocab,
) -> Vec<u32> {
    if hypothesis.text.len() < dangling.len() {
        let remaining = &dangling[hypothesis.text.len()..];
        vocab
            .iter_tokens()
            .filter(|&(id, piece)| {
                id != PAD
                    && id != EOS
                    && id != SEP
                    && id != UNK
                    && (remaining.starts_with(piece) || piece.starts_with(remaining))
            })
            .map(|(id, _)| id)
            .collect()
    } else {
        scorer.candidates(context)
    }
}
