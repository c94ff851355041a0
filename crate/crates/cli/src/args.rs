//! Command-line argument definitions.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use comet_engines::SearchStrategy;
use comet_eval::Metric;
use comet_miner::SubsampleMode;

/// Top-level argument structure for the `comet` binary.
#[derive(Debug, Parser)]
#[command(
    name = "comet",
    version,
    about = "Mine commit corpora, complete commit messages from typed prefixes, and evaluate the results"
)]
pub struct Cli {
    /// Path to a JSON run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Which completion engine to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    /// Nearest-neighbor message reuse over an index of training diffs.
    Retrieval,
    /// Interpolated n-gram model with prefix-constrained beam search.
    Ngram,
    /// External chat-completion endpoint.
    Llm,
}

impl EngineChoice {
    /// The engine name recorded in prediction files.
    pub fn as_str(self) -> &'static str {
        match self {
            EngineChoice::Retrieval => "retrieval",
            EngineChoice::Ngram => "ngram",
            EngineChoice::Llm => "llm",
        }
    }
}

/// Evaluation-subset flavor for `subsample`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SubsampleChoice {
    /// General evaluation set with per-language caps.
    CmgTest,
    /// Author-focused set for history-aware completion.
    LlmTest,
}

impl From<SubsampleChoice> for SubsampleMode {
    fn from(choice: SubsampleChoice) -> SubsampleMode {
        match choice {
            SubsampleChoice::CmgTest => SubsampleMode::CmgTest,
            SubsampleChoice::LlmTest => SubsampleMode::LlmTest,
        }
    }
}

/// Index search strategy for `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyChoice {
    /// Pick exact or approximate based on corpus size.
    Auto,
    /// Always scan every training example.
    Exact,
    /// Always use locality-sensitive hashing.
    Ann,
}

impl StrategyChoice {
    /// Resolve to a concrete strategy; `None` means size-based auto.
    pub fn resolve(self) -> Option<SearchStrategy> {
        match self {
            StrategyChoice::Auto => None,
            StrategyChoice::Exact => Some(SearchStrategy::Exact),
            StrategyChoice::Ann => Some(SearchStrategy::Approximate),
        }
    }
}

/// Metric used by `compare`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricChoice {
    /// Length-normalized smoothed BLEU.
    BNorm,
    /// Normalized edit similarity.
    EditSim,
    /// Exact string match.
    ExactMatch,
}

impl From<MetricChoice> for Metric {
    fn from(choice: MetricChoice) -> Metric {
        match choice {
            MetricChoice::BNorm => Metric::BNorm,
            MetricChoice::EditSim => Metric::EditSim,
            MetricChoice::ExactMatch => Metric::ExactMatch,
        }
    }
}

/// All `comet` subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate commits from local git repositories into a raw dataset.
    Mine {
        /// Repository paths to mine; repeatable.
        #[arg(long, required = true)]
        repo: Vec<PathBuf>,
        /// Output raw JSONL path.
        #[arg(long)]
        out: PathBuf,
        /// Keep only commits at or after this date (YYYY-MM-DD, UTC).
        #[arg(long, default_value = "2017-01-01")]
        since: String,
        /// Exclude commits changing more lines than this.
        #[arg(long, default_value_t = 10_000)]
        max_changed_lines: usize,
        /// Language label; inferred from file extensions when omitted.
        #[arg(long)]
        language: Option<String>,
    },
    /// Run the full cleaning pipeline and write train/validation/test splits.
    Process {
        /// Raw dataset produced by `mine`.
        #[arg(long)]
        input: PathBuf,
        /// Directory for the three splits, the report, and the manifest.
        #[arg(long)]
        out_dir: PathBuf,
        /// Fraction of repositories for the training split.
        #[arg(long, default_value_t = 0.8)]
        train_ratio: f64,
        /// Fraction of repositories for the validation split.
        #[arg(long, default_value_t = 0.1)]
        validation_ratio: f64,
        /// Lower percentile for outlier bounds.
        #[arg(long, default_value_t = 5.0)]
        low_percentile: f64,
        /// Upper percentile for outlier bounds.
        #[arg(long, default_value_t = 95.0)]
        high_percentile: f64,
        /// Split seed; overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Split a raw dataset by repository without any cleaning.
    Split {
        /// Raw dataset produced by `mine`.
        #[arg(long)]
        input: PathBuf,
        /// Directory for the three split files.
        #[arg(long)]
        out_dir: PathBuf,
        /// Fraction of repositories for the training split.
        #[arg(long, default_value_t = 0.8)]
        train_ratio: f64,
        /// Fraction of repositories for the validation split.
        #[arg(long, default_value_t = 0.1)]
        validation_ratio: f64,
        /// Split seed; overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Draw an evaluation subset from a processed split.
    Subsample {
        /// Processed dataset (usually the test split).
        #[arg(long)]
        input: PathBuf,
        /// Output dataset path.
        #[arg(long)]
        out: PathBuf,
        /// Subset flavor.
        #[arg(long, value_enum)]
        mode: SubsampleChoice,
        /// Sampling seed; overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Report filter exclusion statistics for a processed dataset.
    Stats {
        /// Processed dataset to analyze.
        #[arg(long)]
        input: PathBuf,
        /// Also write the table to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the retrieval index from a training split.
    Index {
        /// Processed training split.
        #[arg(long)]
        train: PathBuf,
        /// Output index path.
        #[arg(long)]
        out: PathBuf,
        /// Search strategy.
        #[arg(long, value_enum, default_value_t = StrategyChoice::Auto)]
        strategy: StrategyChoice,
    },
    /// Train the subword vocabulary and the global n-gram model.
    Train {
        /// Processed training split.
        #[arg(long)]
        train: PathBuf,
        /// Output vocabulary path.
        #[arg(long)]
        vocab_out: PathBuf,
        /// Output model path.
        #[arg(long)]
        model_out: PathBuf,
        /// Merge operations; overrides the config value.
        #[arg(long)]
        merges: Option<usize>,
        /// n-gram order; overrides the config value.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Complete commit messages, in batch or interactively.
    Complete {
        /// Which engine to run.
        #[arg(long, value_enum)]
        engine: EngineChoice,
        /// Dataset to complete (batch mode).
        #[arg(long)]
        test: Option<PathBuf>,
        /// Prediction output path (batch mode).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Retrieval index (retrieval and ngram engines).
        #[arg(long)]
        index: Option<PathBuf>,
        /// Subword vocabulary (ngram engine).
        #[arg(long)]
        vocab: Option<PathBuf>,
        /// n-gram model (ngram engine).
        #[arg(long)]
        model: Option<PathBuf>,
        /// Fraction of each reference revealed as the typed prefix.
        #[arg(long)]
        ratio: Option<f64>,
        /// Give engines the author's past messages.
        #[arg(long)]
        history: bool,
        /// Beam width; overrides the config value.
        #[arg(long)]
        beam: Option<usize>,
        /// Generation budget; overrides the config value.
        #[arg(long)]
        max_new_tokens: Option<usize>,
        /// Replay recorded LLM responses instead of calling the endpoint.
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Record LLM traffic to this transcript for later replay.
        #[arg(long)]
        record: Option<PathBuf>,
        /// Complete a message for staged changes instead of a dataset.
        #[arg(long)]
        interactive: bool,
        /// Repository for interactive mode (default: current directory).
        #[arg(long)]
        repo: Option<PathBuf>,
        /// Read the diff from a file instead of the staged changes.
        #[arg(long)]
        diff_file: Option<PathBuf>,
        /// Write the assembled message here (e.g. for a commit hook).
        #[arg(long)]
        message_file: Option<PathBuf>,
    },
    /// Score a prediction file against its references.
    Evaluate {
        /// Prediction file produced by `complete`.
        #[arg(long)]
        predictions: PathBuf,
        /// Write the full JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the prefix-metric series as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Row label in the printed table (default: the engine name).
        #[arg(long)]
        label: Option<String>,
    },
    /// Decide whether two prediction files differ significantly.
    Compare {
        /// First prediction file (side A).
        a: PathBuf,
        /// Second prediction file (side B).
        b: PathBuf,
        /// Metric to compare on.
        #[arg(long, value_enum, default_value_t = MetricChoice::BNorm)]
        metric: MetricChoice,
        /// Bootstrap resamples.
        #[arg(long, default_value_t = 1000)]
        resamples: usize,
        /// Winner declaration threshold.
        #[arg(long, default_value_t = 0.99)]
        confidence: f64,
        /// Resampling seed; overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}
