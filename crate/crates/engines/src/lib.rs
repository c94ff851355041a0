//! Completion engines for commit messages: diff retrieval with a BLEU
//! rerank, a subword n-gram model decoded under a prefix constraint, and
//! a chat-completion client for external language models.

pub mod beam;
pub mod context;
pub mod error;
pub mod llm;
pub mod ngram;
mod persist;
pub mod request;
pub mod retrieval;

pub use beam::{constrained_beam_search, BeamOutcome, SequenceScorer};
pub use context::{build_history_context, build_model_input, HistoryContext, ModelInput};
pub use error::EngineError;
pub use llm::{
    build_llm_prompt, build_llm_prompt_with, chat_response_body, llm_complete, llm_complete_with,
    ChatMessage, ChatRequest, ChatTransport, HttpConfig, HttpTransport, LlmEngine, LlmOptions,
    LlmPrompt, PromptMode, PromptTemplates, RecordingTransport, ReplayTransport, RetryPolicy,
    ScriptedTransport, TranscriptEntry, TransportError,
};
pub use ngram::{
    complete_ngram, complete_ngram_with, ngram_score, train_ngram, InterpolationWeights,
    NgramEngine, NgramModel, NgramScorer,
};
pub use request::{CompletionEngine, CompletionRequest, CompletionResult, EngineKind};
pub use retrieval::{
    build_retrieval_index, build_retrieval_index_with, complete_retrieval, retrieval_suggestions,
    retrieve_similar, IndexedCommit, RetrievalEngine, RetrievalIndex, RetrievedCandidate,
    SearchStrategy,
};
