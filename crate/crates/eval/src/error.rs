use thiserror::Error;

/// Errors raised by aggregation and significance testing.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot aggregate an empty example stream")]
    EmptyInput,

    #[error("aligned lists differ in length: a={a}, b={b}, refs={refs}")]
    LengthMismatch { a: usize, b: usize, refs: usize },
}
