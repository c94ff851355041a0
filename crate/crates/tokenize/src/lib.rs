//! Tokenization for commit messages and diffs.
//!
//! Three layers live here:
//!
//! * whitespace word tokenization ([`word_tokenize`]), the unit used by
//!   retrieval features and word-level metrics;
//! * a from-scratch byte-pair encoder ([`SubwordVocab`]) whose merges may
//!   span word boundaries (spaces are ordinary symbols), used by the n-gram
//!   completion engine;
//! * typed-prefix handling: [`take_char_prefix`] cuts the first X% of
//!   characters and [`split_dangling`] separates the trailing incomplete
//!   word so a decoder can constrain generation to it.

mod bpe;
mod error;
mod words;

pub use bpe::{SubwordVocab, EOS, PAD, SEP, UNK};
pub use error::TokenizeError;
pub use words::{split_dangling, take_char_prefix, word_tokenize, PrefixSplit};
