//! Commit mining and dataset construction.
//!
//! [`enumerate_commits`] extracts raw commits from a local git clone via the
//! `git` executable. The processing pipeline ([`process`]) then runs the
//! stages that turn raw commits into model-ready datasets: repository-level
//! splitting, percentile outlier filtering, message cleaning, diff
//! normalization, cross-split deduplication, author-overlap removal, bot
//! removal, and per-repository author disambiguation. Every stage's drop
//! counts chain into a [`PipelineReport`].

mod authors;
mod dedup;
mod diffproc;
mod error;
mod extract;
mod message;
mod outliers;
mod pipeline;
mod raw;
mod split;
mod subsample;

pub use authors::{drop_bot_authors, drop_overlapping_authors, merge_author_identities, BotList};
pub use dedup::deduplicate;
pub use diffproc::normalize_diff;
pub use error::MinerError;
pub use extract::{enumerate_commits, MineOptions};
pub use message::{clean_message, TrivialPatterns};
pub use outliers::{compute_percentile_bounds, drop_outliers, CommitStats, PercentileBounds};
pub use pipeline::{process, PipelineReport, ProcessConfig, ProcessOutput, StageReport};
pub use raw::{infer_language, read_raw_dataset, write_raw_dataset, RawCommit};
pub use split::{split_by_repository, SplitRatios};
pub use subsample::{subsample_eval, SubsampleMode, SubsampleOptions};
