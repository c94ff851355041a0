//! Criterion 5: prefix-constrained decoding against the trained n-gram
//! engine. Over 500 fuzzed (message, ratio) cases, every result that claims
//! `prefix_honored` starts with the exact typed prefix, and the claim holds
//! in at least 99% of cases.

use comet_core::{read_dataset, render_diff};
use comet_engines::{complete_ngram_with, CompletionRequest, InterpolationWeights, NgramModel, RetrievalIndex};
use comet_tokenize::{take_char_prefix, SubwordVocab};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{desk, pass};

#[test]
fn c05_constrained_decoding_guarantee() {
    let corpus = desk::desk();
    let model = NgramModel::load(&corpus.model).expect("load model");
    let index = RetrievalIndex::load(&corpus.index).expect("load index");
    let vocab = SubwordVocab::load(&corpus.vocab).expect("load vocab");
    let records = read_dataset(&corpus.split("test")).expect("read test split");

    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let weights = InterpolationWeights::default();
    let mut honored = 0usize;
    const CASES: usize = 500;
    for case in 0..CASES {
        let record = &records[rng.gen_range(0..records.len())];
        let ratio = if case % 2 == 0 { 0.25 } else { 0.5 };
        let prefix = take_char_prefix(&record.message, ratio).expect("valid ratio");
        assert!(!prefix.is_empty(), "fuzzed prefix empty for {:?}", record.message);
        let mut request = CompletionRequest::new(render_diff(&record.mods), prefix);
        request.max_new_tokens = 15;
        let result = complete_ngram_with(&model, &index, &request, &vocab, &weights, 3)
            .expect("ngram completion");
        if result.prefix_honored {
            assert!(
                result.full_message.starts_with(prefix),
                "honored result does not start with prefix {prefix:?}: {:?}",
                result.full_message
            );
            honored += 1;
        }
    }
    let rate = honored as f64 / CASES as f64;
    assert!(
        rate >= 0.99,
        "prefix honored in only {honored}/{CASES} cases ({:.1}%)",
        rate * 100.0
    );
    println!("  prefix honored in {honored}/{CASES} fuzzed cases");
    pass(5, "constrained-decoding-guarantee");
}
