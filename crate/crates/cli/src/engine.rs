//! Engine loading and a uniform completion surface for the commands.

use std::path::Path;

use comet_engines::{
    complete_ngram_with, complete_retrieval, llm_complete_with, retrieval_suggestions,
    ChatTransport, CompletionRequest, CompletionResult, EngineError, HttpTransport,
    InterpolationWeights, NgramModel, PromptTemplates, RecordingTransport, ReplayTransport,
    RetrievalIndex, RetryPolicy,
};
use comet_tokenize::SubwordVocab;

use crate::args::EngineChoice;
use crate::config::RunConfig;
use crate::error::{require_exists, CliError, CliResult};

/// A ready-to-run engine with everything it needs loaded.
pub enum LoadedEngine {
    /// Nearest-neighbor message reuse.
    Retrieval { index: RetrievalIndex },
    /// Interpolated n-gram model with constrained beam search.
    Ngram {
        model: NgramModel,
        index: RetrievalIndex,
        vocab: SubwordVocab,
        weights: InterpolationWeights,
        beam_width: usize,
    },
    /// External chat-completion endpoint (live, recorded, or replayed).
    Llm {
        transport: LlmTransport,
        templates: PromptTemplates,
        model: String,
        retry: RetryPolicy,
    },
}

/// LLM transport, kept concrete where the transcript must be saved later.
pub enum LlmTransport {
    /// Live endpoint or replayed transcript.
    Plain(Box<dyn ChatTransport>),
    /// Live endpoint wrapped to capture a transcript.
    Recording(RecordingTransport),
}

impl LlmTransport {
    fn as_dyn(&self) -> &dyn ChatTransport {
        match self {
            LlmTransport::Plain(inner) => inner.as_ref(),
            LlmTransport::Recording(recorder) => recorder,
        }
    }
}

/// Artifact paths for [`load_engine`]; engines ignore paths they do not use.
#[derive(Debug, Default, Clone)]
pub struct EngineArtifacts<'a> {
    /// Retrieval index (retrieval and ngram engines).
    pub index: Option<&'a Path>,
    /// Subword vocabulary (ngram engine).
    pub vocab: Option<&'a Path>,
    /// n-gram model (ngram engine).
    pub model: Option<&'a Path>,
    /// Replay transcript for the LLM engine.
    pub replay: Option<&'a Path>,
    /// Record LLM traffic to this transcript.
    pub record: Option<&'a Path>,
}

fn required<'a>(path: Option<&'a Path>, flag: &str, engine: &str) -> CliResult<&'a Path> {
    let path = path
        .ok_or_else(|| CliError::usage(format!("the {engine} engine requires --{flag}")))?;
    require_exists(path)?;
    Ok(path)
}

/// Load the chosen engine from its artifacts and the run configuration.
pub fn load_engine(
    choice: EngineChoice,
    artifacts: &EngineArtifacts,
    config: &RunConfig,
) -> CliResult<LoadedEngine> {
    match choice {
        EngineChoice::Retrieval => {
            let index = RetrievalIndex::load(required(artifacts.index, "index", "retrieval")?)?;
            Ok(LoadedEngine::Retrieval { index })
        }
        EngineChoice::Ngram => {
            let index = RetrievalIndex::load(required(artifacts.index, "index", "ngram")?)?;
            let vocab = SubwordVocab::load(required(artifacts.vocab, "vocab", "ngram")?)?;
            let model = NgramModel::load(required(artifacts.model, "model", "ngram")?)?;
            Ok(LoadedEngine::Ngram {
                model,
                index,
                vocab,
                weights: config.weights,
                beam_width: config.beam_width,
            })
        }
        EngineChoice::Llm => {
            if artifacts.replay.is_some() && artifacts.record.is_some() {
                return Err(CliError::usage("--replay and --record are mutually exclusive"));
            }
            let transport = if let Some(replay) = artifacts.replay {
                require_exists(replay)?;
                LlmTransport::Plain(Box::new(ReplayTransport::from_path(replay)?))
            } else {
                let http = HttpTransport::new(&config.llm.http)
                    .map_err(|e| CliError::usage(e.to_string()))?;
                if artifacts.record.is_some() {
                    LlmTransport::Recording(RecordingTransport::new(Box::new(http)))
                } else {
                    LlmTransport::Plain(Box::new(http))
                }
            };
            let templates = match &config.llm.template_dir {
                Some(dir) => {
                    require_exists(dir)?;
                    PromptTemplates::from_dir(dir)?
                }
                None => PromptTemplates::builtin(),
            };
            Ok(LoadedEngine::Llm {
                transport,
                templates,
                model: config.llm.model.clone(),
                retry: RetryPolicy::default(),
            })
        }
    }
}

impl LoadedEngine {
    /// Run one completion.
    pub fn complete(&self, request: &CompletionRequest) -> Result<CompletionResult, EngineError> {
        match self {
            LoadedEngine::Retrieval { index } => {
                request.check()?;
                Ok(complete_retrieval(index, request))
            }
            LoadedEngine::Ngram {
                model,
                index,
                vocab,
                weights,
                beam_width,
            } => complete_ngram_with(model, index, request, vocab, weights, *beam_width),
            LoadedEngine::Llm {
                transport,
                templates,
                model,
                retry,
            } => llm_complete_with(transport.as_dyn(), request, templates, model, retry),
        }
    }

    /// Up to `limit` ranked completions; engines without ranked
    /// alternatives return a single suggestion.
    pub fn suggestions(
        &self,
        request: &CompletionRequest,
        limit: usize,
    ) -> Result<Vec<CompletionResult>, EngineError> {
        match self {
            LoadedEngine::Retrieval { index } => {
                request.check()?;
                Ok(retrieval_suggestions(index, request, limit))
            }
            _ => Ok(vec![self.complete(request)?]),
        }
    }

    /// If recording, write the transcript; a no-op for other transports.
    pub fn save_transcript(&self, path: &Path) -> CliResult<()> {
        if let LoadedEngine::Llm {
            transport: LlmTransport::Recording(recorder),
            ..
        } = self
        {
            recorder.save(path)?;
        }
        Ok(())
    }
}
