//! The cleaning pipeline: from raw mined commits to dataset splits.
//!
//! Stages run in a fixed order. Splitting happens first so that every
//! later decision (including outlier bounds, which are computed over the
//! whole corpus) is reproducible from the raw dataset alone:
//!
//! 1. split by repository,
//! 2. drop size outliers (corpus-wide percentile bounds),
//! 3. clean or drop messages,
//! 4. normalize or drop diffs,
//! 5. drop duplicates (global, transitive),
//! 6. drop training authors that overlap validation/test,
//! 7. drop bot authors,
//! 8. merge author identities into numeric ids.

use std::collections::HashMap;

use comet_core::{CommitRecord, DatasetSplit};

use crate::authors::{drop_bot_authors, drop_overlapping_authors, merge_author_identities, BotList};
use crate::dedup::keeper_flags;
use crate::diffproc::normalize_diff;
use crate::error::MinerError;
use crate::message::{clean_message, TrivialPatterns};
use crate::outliers::{compute_percentile_bounds, drop_outliers};
use crate::raw::RawCommit;
use crate::split::{split_by_repository, SplitRatios};

/// Configuration for [`process`].
#[derive(Debug, Clone)]
pub struct ProcessConfig {
    /// Repository fractions per split.
    pub ratios: SplitRatios,
    /// Seed for the split shuffle.
    pub seed: u64,
    /// Lower percentile for outlier bounds.
    pub low_percentile: f64,
    /// Upper percentile for outlier bounds.
    pub high_percentile: f64,
    /// Patterns for trivial messages.
    pub trivial: TrivialPatterns,
    /// Known automation accounts.
    pub bots: BotList,
}

impl Default for ProcessConfig {
    fn default() -> Self {
        ProcessConfig {
            ratios: SplitRatios::default(),
            seed: 0,
            low_percentile: 5.0,
            high_percentile: 95.0,
            trivial: TrivialPatterns::builtin(),
            bots: BotList::builtin(),
        }
    }
}

/// One pipeline stage's accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct StageReport {
    /// Stage name.
    pub name: &'static str,
    /// Commits entering the stage.
    pub input: usize,
    /// Commits removed by the stage.
    pub dropped: usize,
    /// Commits leaving the stage.
    pub surviving: usize,
    /// `dropped` as a percentage of `input`.
    pub pct: f64,
}

impl StageReport {
    fn new(name: &'static str, input: usize, surviving: usize) -> StageReport {
        let dropped = input - surviving;
        StageReport {
            name,
            input,
            dropped,
            surviving,
            pct: if input == 0 {
                0.0
            } else {
                100.0 * dropped as f64 / input as f64
            },
        }
    }
}

/// Accounting for a whole pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    /// Per-stage accounting, in execution order.
    pub stages: Vec<StageReport>,
    /// Caveats about the run worth surfacing alongside the numbers.
    pub notes: Vec<String>,
}

impl PipelineReport {
    /// Render the report as an aligned text table.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<16} {:>10} {:>10} {:>10} {:>8}\n",
            "stage", "input", "dropped", "surviving", "pct"
        ));
        for s in &self.stages {
            out.push_str(&format!(
                "{:<16} {:>10} {:>10} {:>10} {:>7.2}%\n",
                s.name, s.input, s.dropped, s.surviving, s.pct
            ));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

/// Output of [`process`]: cleaned splits plus the run's accounting.
#[derive(Debug, Clone)]
pub struct ProcessOutput {
    /// Training split.
    pub train: Vec<CommitRecord>,
    /// Validation split.
    pub validation: Vec<CommitRecord>,
    /// Test split.
    pub test: Vec<CommitRecord>,
    /// Per-stage accounting.
    pub report: PipelineReport,
}

/// Three split vectors, train/validation/test.
type Splits = (Vec<RawCommit>, Vec<RawCommit>, Vec<RawCommit>);

fn take_splits(mut map: HashMap<DatasetSplit, Vec<RawCommit>>) -> Splits {
    (
        map.remove(&DatasetSplit::Train).unwrap_or_default(),
        map.remove(&DatasetSplit::Validation).unwrap_or_default(),
        map.remove(&DatasetSplit::Test).unwrap_or_default(),
    )
}

fn total(splits: &Splits) -> usize {
    splits.0.len() + splits.1.len() + splits.2.len()
}

/// Apply a keep-or-transform function to every commit of every split.
fn retain_map(splits: Splits, mut f: impl FnMut(RawCommit) -> Option<RawCommit>) -> Splits {
    let apply = |commits: Vec<RawCommit>, f: &mut dyn FnMut(RawCommit) -> Option<RawCommit>| {
        commits.into_iter().filter_map(f).collect()
    };
    let (train, validation, test) = splits;
    (
        apply(train, &mut f),
        apply(validation, &mut f),
        apply(test, &mut f),
    )
}

/// Run the full cleaning pipeline over raw mined commits.
///
/// Returns the three cleaned splits as dataset records plus a per-stage
/// report whose counts chain: each stage's `input` equals the previous
/// stage's `surviving`.
pub fn process(raw: Vec<RawCommit>, config: &ProcessConfig) -> Result<ProcessOutput, MinerError> {
    if raw.is_empty() {
        return Err(MinerError::EmptyInput("pipeline"));
    }
    let mut stages = Vec::new();

    // 1. Split by repository (drops nothing).
    let mut splits = take_splits(split_by_repository(raw, config.ratios, config.seed)?);

    // 2. Outliers, with bounds computed over the whole corpus.
    let input = total(&splits);
    let bounds = {
        let combined: Vec<RawCommit> = splits
            .0
            .iter()
            .chain(splits.1.iter())
            .chain(splits.2.iter())
            .cloned()
            .collect();
        compute_percentile_bounds(&combined, config.low_percentile, config.high_percentile)?
    };
    splits = (
        drop_outliers(splits.0, &bounds),
        drop_outliers(splits.1, &bounds),
        drop_outliers(splits.2, &bounds),
    );
    stages.push(StageReport::new("outliers", input, total(&splits)));

    // 3. Messages.
    let input = total(&splits);
    splits = retain_map(splits, |mut c| {
        let cleaned = clean_message(&c.message, &config.trivial)?;
        c.message = cleaned;
        Some(c)
    });
    stages.push(StageReport::new("messages", input, total(&splits)));

    // 4. Diffs.
    let input = total(&splits);
    splits = retain_map(splits, |mut c| {
        let normalized = normalize_diff(&c.mods)?;
        c.mods = normalized;
        Some(c)
    });
    stages.push(StageReport::new("diffs", input, total(&splits)));

    // 5. Duplicates, resolved globally across splits.
    let input = total(&splits);
    let (train, validation, test) = splits;
    let (t, v) = (train.len(), validation.len());
    let combined: Vec<RawCommit> = train
        .into_iter()
        .chain(validation)
        .chain(test)
        .collect();
    let keep = keeper_flags(&combined);
    let mut train = Vec::new();
    let mut validation = Vec::new();
    let mut test = Vec::new();
    for (i, (commit, kept)) in combined.into_iter().zip(keep).enumerate() {
        if !kept {
            continue;
        }
        if i < t {
            train.push(commit);
        } else if i < t + v {
            validation.push(commit);
        } else {
            test.push(commit);
        }
    }
    splits = (train, validation, test);
    stages.push(StageReport::new("duplicates", input, total(&splits)));

    // 6. Author overlap: training commits by authors seen in holdout.
    let input = total(&splits);
    let (train, validation, test) = splits;
    let train = drop_overlapping_authors(train, &validation, &test);
    splits = (train, validation, test);
    stages.push(StageReport::new("author overlap", input, total(&splits)));

    // 7. Bots.
    let input = total(&splits);
    splits = (
        drop_bot_authors(splits.0, &config.bots),
        drop_bot_authors(splits.1, &config.bots),
        drop_bot_authors(splits.2, &config.bots),
    );
    stages.push(StageReport::new("bots", input, total(&splits)));

    // 8. Identity merge (drops nothing).
    let (train, validation, test) = splits;
    let (t, v) = (train.len(), validation.len());
    let combined: Vec<RawCommit> = train
        .into_iter()
        .chain(validation)
        .chain(test)
        .collect();
    let mut records = merge_author_identities(&combined);
    let test_records = records.split_off(t + v);
    let validation_records = records.split_off(t);

    let notes = vec![
        "author overlap is decided on globally merged raw identities; \
         numeric author ids are merged per repository"
            .to_string(),
    ];
    Ok(ProcessOutput {
        train: records,
        validation: validation_records,
        test: test_records,
        report: PipelineReport { stages, notes },
    })
}
