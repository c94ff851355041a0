//! Metrics and statistics for judging commit-message completions.
//!
//! Three per-example metrics: [`b_norm`] (smoothed sentence BLEU-4 on
//! lowercased word tokens), [`edit_similarity`] (character-level Levenshtein
//! similarity), and [`exact_match_prefix`] (strict equality, optionally over
//! the first k words). On top of those sit the prefix-metric series
//! (metrics computed between k-token truncations of prediction and
//! reference), corpus aggregation, and paired bootstrap resampling for
//! deciding whether one engine beats another.

mod aggregate;
mod bootstrap;
mod error;
mod metrics;
mod series;

pub use aggregate::{aggregate, render_series_csv, render_table, AggregateReport, TableRow};
pub use bootstrap::{paired_bootstrap, SignificanceVerdict, Winner};
pub use error::EvalError;
pub use metrics::{
    b_norm, edit_similarity, exact_match_prefix, levenshtein, Metric, MetricValue,
};
pub use series::{
    score_example, truncate_to_tokens, ExampleMetrics, PrefixSeries, PrefixSeriesExample,
    B_NORM_KS, EDIT_SIM_KS, EM_KS,
};
