//! Run configuration: one JSON file covering engine parameters, context
//! handling, seeds, and LLM endpoint settings.

use std::path::{Path, PathBuf};

use comet_engines::{HttpConfig, InterpolationWeights};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Settings for the external LLM engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LlmSettings {
    /// Model identifier sent with each request.
    pub model: String,
    /// Endpoint, credential variable name, and rate limits.
    pub http: HttpConfig,
    /// Directory with prompt template overrides; `None` uses the built-ins.
    pub template_dir: Option<PathBuf>,
}

impl Default for LlmSettings {
    fn default() -> Self {
        LlmSettings {
            model: comet_engines::llm::DEFAULT_MODEL.to_string(),
            http: HttpConfig::default(),
            template_dir: None,
        }
    }
}

/// Every knob a batch run needs, with working defaults.
///
/// All fields are optional in the JSON file; absent fields keep their
/// defaults, so `{}` is a valid configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// n-gram order used by `train` and the n-gram engine.
    pub order: usize,
    /// Interpolation weights for global/retrieved/history models.
    pub weights: InterpolationWeights,
    /// Beam width for constrained decoding.
    pub beam_width: usize,
    /// Generation budget in subword tokens.
    pub max_new_tokens: usize,
    /// Model input budget in subword tokens.
    pub context_budget_tokens: usize,
    /// Fraction of each reference message revealed as the typed prefix.
    pub context_ratio: f64,
    /// Whether engines see the author's past messages.
    pub use_history: bool,
    /// Maximum number of past messages kept per author.
    pub history_cap: usize,
    /// Seed for every stochastic step (splits, subsampling, bootstrap).
    pub seed: u64,
    /// Number of merge operations when training the subword vocabulary.
    pub merges: usize,
    /// External LLM engine settings.
    pub llm: LlmSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: comet_engines::ngram::DEFAULT_ORDER,
            weights: InterpolationWeights::default(),
            beam_width: comet_engines::ngram::DEFAULT_BEAM_WIDTH,
            max_new_tokens: 15,
            context_budget_tokens: 512,
            context_ratio: 0.0,
            use_history: false,
            history_cap: 20,
            seed: 0,
            merges: 1000,
            llm: LlmSettings::default(),
        }
    }
}

impl RunConfig {
    /// Read a configuration file, falling back to defaults for absent keys.
    pub fn load(path: &Path) -> CliResult<RunConfig> {
        crate::error::require_exists(path)?;
        let body = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&body)
            .map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))?;
        config.check()?;
        Ok(config)
    }

    /// Validate ranges that the type system cannot express.
    pub fn check(&self) -> CliResult<()> {
        if !(0.0..=1.0).contains(&self.context_ratio) {
            return Err(CliError::usage(format!(
                "context_ratio must be within [0, 1], got {}",
                self.context_ratio
            )));
        }
        if self.order == 0 {
            return Err(CliError::usage("order must be at least 1"));
        }
        if self.beam_width == 0 {
            return Err(CliError::usage("beam_width must be at least 1"));
        }
        if self.max_new_tokens == 0 {
            return Err(CliError::usage("max_new_tokens must be at least 1"));
        }
        self.weights
            .check()
            .map_err(|e| CliError::usage(e.to_string()))?;
        Ok(())
    }
}
