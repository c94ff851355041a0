//! Dataset commands: mine, process, split, subsample, stats.

use std::path::{Path, PathBuf};

use comet_core::{read_dataset, write_dataset, DatasetSplit};
use comet_filters::{filter_statistics, render_stats_table, FilterConfig};
use comet_miner::{
    enumerate_commits, process, read_raw_dataset, split_by_repository, subsample_eval,
    write_raw_dataset, BotList, MineOptions, ProcessConfig, SplitRatios, SubsampleMode,
    SubsampleOptions, TrivialPatterns,
};

use crate::config::RunConfig;
use crate::error::{require_exists, CliError, CliResult};
use crate::manifest::write_manifest;

/// Mine raw commits from one or more local repositories into one file.
pub fn mine(
    repos: &[PathBuf],
    out: &Path,
    since: &str,
    max_changed_lines: usize,
    language: Option<String>,
    config: &RunConfig,
) -> CliResult<()> {
    for repo in repos {
        require_exists(repo)?;
    }
    let options = MineOptions {
        since: since.to_string(),
        max_changed_lines,
        language,
    };
    let mut raw = Vec::new();
    for repo in repos {
        raw.extend(enumerate_commits(repo, &options)?);
    }
    let written = write_raw_dataset(out, &raw)?;
    eprintln!("mined {written} commits from {} repositories", repos.len());
    let inputs: Vec<&Path> = repos.iter().map(PathBuf::as_path).collect();
    write_manifest(
        "mine",
        config,
        serde_json::json!({
            "since": options.since,
            "max_changed_lines": options.max_changed_lines,
            "language": options.language,
        }),
        &inputs,
        &[out],
    )
}

/// Shared ratio plumbing for `process` and `split`.
fn ratios(train: f64, validation: f64) -> CliResult<SplitRatios> {
    for (name, value) in [("train-ratio", train), ("validation-ratio", validation)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(CliError::usage(format!(
                "--{name} must be within [0, 1], got {value}"
            )));
        }
    }
    Ok(SplitRatios { train, validation })
}

/// Run the cleaning pipeline and write the three splits plus the report.
#[allow(clippy::too_many_arguments)]
pub fn process_cmd(
    input: &Path,
    out_dir: &Path,
    train_ratio: f64,
    validation_ratio: f64,
    low_percentile: f64,
    high_percentile: f64,
    seed: u64,
    config: &RunConfig,
) -> CliResult<()> {
    require_exists(input)?;
    let raw = read_raw_dataset(input)?;
    let pipeline = ProcessConfig {
        ratios: ratios(train_ratio, validation_ratio)?,
        seed,
        low_percentile,
        high_percentile,
        trivial: TrivialPatterns::builtin(),
        bots: BotList::builtin(),
    };
    let output = process(raw, &pipeline)?;
    std::fs::create_dir_all(out_dir)?;

    for (split, records) in [
        (DatasetSplit::Train, &output.train),
        (DatasetSplit::Validation, &output.validation),
        (DatasetSplit::Test, &output.test),
    ] {
        let path = out_dir.join(format!("{}.jsonl", split.as_str()));
        write_dataset(&path, records.iter())?;
    }
    std::fs::write(out_dir.join("report.txt"), output.report.render())?;
    eprint!("{}", output.report.render());

    write_manifest(
        "process",
        config,
        serde_json::json!({
            "train_ratio": train_ratio,
            "validation_ratio": validation_ratio,
            "low_percentile": low_percentile,
            "high_percentile": high_percentile,
            "seed": seed,
        }),
        &[input],
        &[out_dir],
    )
}

/// Split a raw dataset by repository without cleaning.
pub fn split_cmd(
    input: &Path,
    out_dir: &Path,
    train_ratio: f64,
    validation_ratio: f64,
    seed: u64,
    config: &RunConfig,
) -> CliResult<()> {
    require_exists(input)?;
    let raw = read_raw_dataset(input)?;
    let mut splits = split_by_repository(raw, ratios(train_ratio, validation_ratio)?, seed)?;
    std::fs::create_dir_all(out_dir)?;
    for split in [
        DatasetSplit::Train,
        DatasetSplit::Validation,
        DatasetSplit::Test,
    ] {
        let records = splits.remove(&split).unwrap_or_default();
        let path = out_dir.join(format!("{}.jsonl", split.as_str()));
        write_raw_dataset(&path, &records)?;
    }
    write_manifest(
        "split",
        config,
        serde_json::json!({
            "train_ratio": train_ratio,
            "validation_ratio": validation_ratio,
            "seed": seed,
        }),
        &[input],
        &[out_dir],
    )
}

/// Draw an evaluation subset from a processed split.
pub fn subsample_cmd(
    input: &Path,
    out: &Path,
    mode: SubsampleMode,
    seed: u64,
    config: &RunConfig,
) -> CliResult<()> {
    require_exists(input)?;
    let records = read_dataset(input)?;
    let options = SubsampleOptions {
        seed,
        ..SubsampleOptions::default()
    };
    let subset = subsample_eval(&records, mode, &options)?;
    let written = write_dataset(out, subset.iter())?;
    eprintln!("subsampled {written} of {} commits", records.len());
    write_manifest(
        "subsample",
        config,
        serde_json::json!({
            "mode": match mode {
                SubsampleMode::CmgTest => "cmg-test",
                SubsampleMode::LlmTest => "llm-test",
            },
            "seed": seed,
        }),
        &[input],
        &[out],
    )
}

/// Print (and optionally save) filter exclusion statistics.
pub fn stats_cmd(input: &Path, out: Option<&Path>, config: &RunConfig) -> CliResult<()> {
    require_exists(input)?;
    let records = read_dataset(input)?;
    let stats = filter_statistics(&records, &FilterConfig::builtin())?;
    let table = render_stats_table(&stats);
    print!("{table}");
    if let Some(path) = out {
        std::fs::write(path, &table)?;
        write_manifest(
            "stats",
            config,
            serde_json::json!({}),
            &[input],
            &[path],
        )?;
    }
    Ok(())
}
