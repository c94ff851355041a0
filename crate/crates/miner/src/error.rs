use thiserror::Error;

/// Errors raised while mining repositories or running the pipeline.
#[derive(Debug, Error)]
pub enum MinerError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{path} is not a git repository (or git failed): {detail}")]
    NotARepository { path: String, detail: String },

    #[error("git produced unparseable output: {0}")]
    GitOutput(String),

    #[error("invalid date {0:?}: expected YYYY-MM-DD")]
    BadDate(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("need at least 3 repositories to split, got {0}")]
    TooFewRepositories(usize),

    #[error("split ratios must sum to 1, got {0}")]
    BadRatios(f64),

    #[error("line {line}: malformed raw record: {detail}")]
    BadRawRecord { line: usize, detail: String },

    #[error("dataset error: {0}")]
    Dataset(#[from] comet_core::DatasetError),
}
