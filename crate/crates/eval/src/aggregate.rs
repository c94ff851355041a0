use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::series::{ExampleMetrics, PrefixSeries, B_NORM_KS, EDIT_SIM_KS, EM_KS};

/// Corpus-level aggregate: arithmetic means of every metric and series
/// point. Exact match is reported as a percentage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub examples: usize,
    pub b_norm: f64,
    pub edit_sim: f64,
    pub exact_match: f64,
    pub series: PrefixSeries,
}

/// Average per-example metrics over a corpus.
pub fn aggregate(examples: &[ExampleMetrics]) -> Result<AggregateReport, EvalError> {
    if examples.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let n = examples.len() as f64;
    let mut report = AggregateReport {
        examples: examples.len(),
        b_norm: 0.0,
        edit_sim: 0.0,
        exact_match: 0.0,
        series: PrefixSeries {
            em: [0.0; 2],
            b_norm: [0.0; 7],
            edit_sim: [0.0; 10],
        },
    };
    for ex in examples {
        report.b_norm += ex.b_norm;
        report.edit_sim += ex.edit_sim;
        report.exact_match += if ex.exact_match { 100.0 } else { 0.0 };
        for (acc, &v) in report.series.em.iter_mut().zip(&ex.series.em) {
            *acc += if v { 100.0 } else { 0.0 };
        }
        for (acc, v) in report.series.b_norm.iter_mut().zip(&ex.series.b_norm) {
            *acc += v;
        }
        for (acc, v) in report.series.edit_sim.iter_mut().zip(&ex.series.edit_sim) {
            *acc += v;
        }
    }
    report.b_norm /= n;
    report.edit_sim /= n;
    report.exact_match /= n;
    for v in report
        .series
        .em
        .iter_mut()
        .chain(report.series.b_norm.iter_mut())
        .chain(report.series.edit_sim.iter_mut())
    {
        *v /= n;
    }
    Ok(report)
}

/// One row of the comparison table.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub label: String,
    pub b_norm: f64,
    pub edit_sim: f64,
    pub em1: f64,
    pub em2: f64,
}

impl TableRow {
    pub fn from_report(label: impl Into<String>, report: &AggregateReport) -> Self {
        TableRow {
            label: label.into(),
            b_norm: report.b_norm,
            edit_sim: report.edit_sim,
            em1: report.series.em[0],
            em2: report.series.em[1],
        }
    }
}

/// Render rows as an aligned plain-text table.
pub fn render_table(rows: &[TableRow]) -> String {
    let headers = ["", "B-Norm", "EdSim", "EM@1", "EM@2"];
    let mut cells: Vec<[String; 5]> = vec![headers.map(String::from)];
    for row in rows {
        cells.push([
            row.label.clone(),
            format!("{:.2}", row.b_norm),
            format!("{:.2}", row.edit_sim),
            format!("{:.2}", row.em1),
            format!("{:.2}", row.em2),
        ]);
    }
    let mut widths = [0usize; 5];
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &cells {
        let mut line = String::new();
        for (i, (cell, w)) in row.iter().zip(widths).enumerate() {
            if i == 0 {
                line.push_str(&format!("{cell:<w$}"));
            } else {
                line.push_str(&format!("  {cell:>w$}"));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Render the prefix series as CSV with columns `k,metric,value`.
pub fn render_series_csv(series: &PrefixSeries) -> String {
    let mut out = String::from("k,metric,value\n");
    for (k, v) in EM_KS.iter().zip(&series.em) {
        out.push_str(&format!("{k},exact_match,{v:.4}\n"));
    }
    for (k, v) in B_NORM_KS.iter().zip(&series.b_norm) {
        out.push_str(&format!("{k},b_norm,{v:.4}\n"));
    }
    for (k, v) in EDIT_SIM_KS.iter().zip(&series.edit_sim) {
        out.push_str(&format!("{k},edit_sim,{v:.4}\n"));
    }
    out
}
