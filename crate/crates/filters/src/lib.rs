//! Restrictive commit filters and the subset partitioning built on them.
//!
//! Earlier commit-message datasets kept only commits whose messages follow a
//! narrow shape: a single sentence starting with a verb and a direct object,
//! short messages, small diffs, source-code-only changes. This crate
//! implements those filters as pure predicates over [`comet_core::CommitRecord`],
//! measures how much of a corpus each filter would exclude, and splits an
//! evaluation set into filtered / random / out-of-filters subsets so the
//! effect of the filters can be compared directly.

mod config;
mod partition;
mod predicates;
mod stats;

pub use config::FilterConfig;
pub use partition::{partition_by_filters, SubsetPartition};
pub use predicates::{
    first_sentence, passes_diff_length, passes_message_length, passes_only_code, passes_vdo,
    FilterVerdict,
};
pub use stats::{filter_statistics, render_stats_table, FilterStatistics};

use thiserror::Error;

/// Errors raised by filter configuration and partitioning.
#[derive(Debug, Error)]
pub enum FilterError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed extension map: {0}")]
    BadExtensionMap(#[from] serde_json::Error),

    #[error("unknown language {0:?} (not in the extension map)")]
    UnknownLanguage(String),

    #[error("no records pass all filters; nothing to compare")]
    EmptyFilteredSet,

    #[error("no records to examine")]
    EmptyInput,
}
