use thiserror::Error;

/// Errors raised by engine construction and completion.
#[derive(Debug, Error)]
pub enum EngineError {
    /// An index or model was asked to train on nothing.
    #[error("empty corpus: {0}")]
    EmptyCorpus(&'static str),
    /// A prompt was requested for completion without a prefix.
    #[error("completion prompt requires a non-empty prefix")]
    EmptyPrefix,
    /// A request or result violated a type invariant.
    #[error("bad request: {0}")]
    BadRequest(&'static str),
    /// Interpolation weights were negative, non-finite, or massless.
    #[error("interpolation weights must be non-negative with positive global mass")]
    BadWeights,
    /// An n-gram model was asked for order zero.
    #[error("n-gram order must be at least 1")]
    BadOrder,
    /// The remote endpoint rejected the credential.
    #[error("authentication failed: {0}")]
    AuthFailure(String),
    /// The remote endpoint kept failing after all retries.
    #[error("retries exhausted after {attempts} attempts: {last_error}")]
    RetriesExhausted {
        attempts: usize,
        last_error: String,
    },
    /// The remote endpoint answered with something unparseable.
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    /// The credential environment variable is missing.
    #[error("credential environment variable {0} is not set")]
    MissingCredential(String),
    /// Transport-level failure (connection, TLS, I/O).
    #[error("transport error: {0}")]
    Transport(String),
    /// Tokenizer failure surfaced through an engine.
    #[error(transparent)]
    Tokenize(#[from] comet_tokenize::TokenizeError),
    /// Filesystem failure while persisting or loading.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Serialization failure while persisting or loading.
    #[error("persistence failure: {0}")]
    Persist(String),
}
