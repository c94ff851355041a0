use thiserror::Error;

/// Errors raised by tokenizer training, application, and persistence.
#[derive(Debug, Error)]
pub enum TokenizeError {
    #[error("cannot train a vocabulary on an empty corpus")]
    EmptyCorpus,

    #[error("prefix ratio must lie in [0, 1], got {0}")]
    RatioOutOfRange(f64),

    #[error("token id {id} out of range for vocabulary of size {size}")]
    IdOutOfRange { id: u32, size: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("vocabulary file line {line}: {detail}")]
    BadVocabFile { line: usize, detail: String },
}
