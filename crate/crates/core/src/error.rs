use thiserror::Error;

/// Errors raised while reading or writing dataset files.
#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: malformed JSON: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error("line {line}: invalid record field `{field}`: {detail}")]
    Invalid {
        line: usize,
        field: &'static str,
        detail: String,
    },

    #[error("record {hash}: invalid field `{field}`: {detail}")]
    InvalidRecord {
        hash: String,
        field: &'static str,
        detail: String,
    },
}
