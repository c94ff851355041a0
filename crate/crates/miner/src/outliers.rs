//! Outlier removal by size statistics.
//!
//! Five size statistics are computed per commit; commits with any statistic
//! outside the corpus-wide percentile bounds are dropped.

use comet_core::render_diff;

use crate::error::MinerError;
use crate::raw::RawCommit;

/// The size statistics of one commit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommitStats {
    /// Whitespace-separated tokens in the message.
    pub message_tokens: usize,
    /// Characters in the message.
    pub message_chars: usize,
    /// Whitespace-separated tokens in the rendered diff.
    pub diff_tokens: usize,
    /// Characters in the rendered diff.
    pub diff_chars: usize,
    /// Number of modified files.
    pub file_count: usize,
}

impl CommitStats {
    /// Compute the statistics for one commit.
    pub fn of(commit: &RawCommit) -> CommitStats {
        let rendered = render_diff(&commit.mods);
        CommitStats {
            message_tokens: commit.message.split_whitespace().count(),
            message_chars: commit.message.chars().count(),
            diff_tokens: rendered.split_whitespace().count(),
            diff_chars: rendered.chars().count(),
            file_count: commit.mods.len(),
        }
    }

    fn as_array(&self) -> [usize; 5] {
        [
            self.message_tokens,
            self.message_chars,
            self.diff_tokens,
            self.diff_chars,
            self.file_count,
        ]
    }
}

/// Closed `[low, high]` intervals for the five commit statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PercentileBounds {
    /// Lower bound per statistic, in [`CommitStats`] field order.
    pub low: [usize; 5],
    /// Upper bound per statistic, in [`CommitStats`] field order.
    pub high: [usize; 5],
}

impl PercentileBounds {
    /// Whether a commit falls inside all five closed intervals.
    pub fn contains(&self, stats: &CommitStats) -> bool {
        stats
            .as_array()
            .iter()
            .enumerate()
            .all(|(i, &v)| self.low[i] <= v && v <= self.high[i])
    }
}

/// Nearest-rank percentile of a sorted list: the value at rank
/// `ceil(p/100 * n)`, counting from one (minimum rank one).
pub(crate) fn nearest_rank(sorted: &[usize], percentile: f64) -> usize {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len() as f64;
    let rank = (percentile / 100.0 * n).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Compute per-statistic percentile bounds over a whole corpus.
///
/// Each bound is the nearest-rank percentile of that statistic's
/// distribution. Errors on an empty corpus.
pub fn compute_percentile_bounds(
    commits: &[RawCommit],
    low_percentile: f64,
    high_percentile: f64,
) -> Result<PercentileBounds, MinerError> {
    if commits.is_empty() {
        return Err(MinerError::EmptyInput("percentile bounds"));
    }
    let all: Vec<[usize; 5]> = commits.iter().map(|c| CommitStats::of(c).as_array()).collect();
    let mut low = [0usize; 5];
    let mut high = [0usize; 5];
    for i in 0..5 {
        let mut column: Vec<usize> = all.iter().map(|s| s[i]).collect();
        column.sort_unstable();
        low[i] = nearest_rank(&column, low_percentile);
        high[i] = nearest_rank(&column, high_percentile);
    }
    Ok(PercentileBounds { low, high })
}

/// Keep only commits whose statistics fall inside `bounds`.
pub fn drop_outliers(commits: Vec<RawCommit>, bounds: &PercentileBounds) -> Vec<RawCommit> {
    commits
        .into_iter()
        .filter(|c| bounds.contains(&CommitStats::of(c)))
        .collect()
}
