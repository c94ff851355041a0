use comet_core::CommitRecord;
use serde::{Deserialize, Serialize};

use crate::config::FilterConfig;
use crate::predicates::FilterVerdict;
use crate::FilterError;

/// Fraction of records each filter would exclude, in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterStatistics {
    pub examined: usize,
    pub first_sentence: f64,
    pub vdo: f64,
    pub message_length: f64,
    pub diff_length: f64,
    pub only_code: f64,
}

/// Measure how much of a corpus each filter excludes.
pub fn filter_statistics(
    records: &[CommitRecord],
    config: &FilterConfig,
) -> Result<FilterStatistics, FilterError> {
    if records.is_empty() {
        return Err(FilterError::EmptyInput);
    }
    let mut fails = [0usize; 5];
    for record in records {
        let v = FilterVerdict::of(record, config);
        for (slot, pass) in fails.iter_mut().zip([
            v.first_sentence_only,
            v.vdo,
            v.message_length_ok,
            v.diff_length_ok,
            v.only_code,
        ]) {
            *slot += usize::from(!pass);
        }
    }
    let n = records.len() as f64;
    Ok(FilterStatistics {
        examined: records.len(),
        first_sentence: fails[0] as f64 / n,
        vdo: fails[1] as f64 / n,
        message_length: fails[2] as f64 / n,
        diff_length: fails[3] as f64 / n,
        only_code: fails[4] as f64 / n,
    })
}

/// Render statistics as an aligned plain-text table.
pub fn render_stats_table(stats: &FilterStatistics) -> String {
    let rows = [
        ("First Sentence", stats.first_sentence),
        ("V-DO", stats.vdo),
        ("Message Length", stats.message_length),
        ("Diff Length", stats.diff_length),
        ("Only Code", stats.only_code),
    ];
    let name_width = rows.iter().map(|(n, _)| n.len()).max().unwrap();
    let mut out = format!("{:<name_width$}  excluded\n", "filter");
    for (name, frac) in rows {
        out.push_str(&format!("{name:<name_width$}  {:7.1}%\n", frac * 100.0));
    }
    out.push_str(&format!("({} records examined)\n", stats.examined));
    out
}
