//! Command-line front end for the commit message completion toolkit:
//! corpus mining and cleaning, engine training, batch and interactive
//! completion, evaluation, and significance testing.

pub mod args;
pub mod complete;
pub mod config;
pub mod data;
pub mod engine;
pub mod error;
pub mod interactive;
pub mod manifest;
pub mod model;
pub mod predictions;
pub mod report;

use std::path::{Path, PathBuf};

use args::{Cli, Command};
use config::RunConfig;
use engine::{load_engine, EngineArtifacts};
use error::{CliError, CliResult};
use interactive::InteractiveOptions;

/// Load the configuration named on the command line, or the defaults.
fn effective_config(path: Option<&Path>) -> CliResult<RunConfig> {
    match path {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}

/// Execute a parsed command line. Errors map to exit codes via
/// [`CliError::exit_code`].
pub fn run(cli: Cli) -> CliResult<()> {
    let mut config = effective_config(cli.config.as_deref())?;
    match cli.command {
        Command::Mine {
            repo,
            out,
            since,
            max_changed_lines,
            language,
        } => data::mine(&repo, &out, &since, max_changed_lines, language, &config),
        Command::Process {
            input,
            out_dir,
            train_ratio,
            validation_ratio,
            low_percentile,
            high_percentile,
            seed,
        } => data::process_cmd(
            &input,
            &out_dir,
            train_ratio,
            validation_ratio,
            low_percentile,
            high_percentile,
            seed.unwrap_or(config.seed),
            &config,
        ),
        Command::Split {
            input,
            out_dir,
            train_ratio,
            validation_ratio,
            seed,
        } => data::split_cmd(
            &input,
            &out_dir,
            train_ratio,
            validation_ratio,
            seed.unwrap_or(config.seed),
            &config,
        ),
        Command::Subsample {
            input,
            out,
            mode,
            seed,
        } => data::subsample_cmd(
            &input,
            &out,
            mode.into(),
            seed.unwrap_or(config.seed),
            &config,
        ),
        Command::Stats { input, out } => data::stats_cmd(&input, out.as_deref(), &config),
        Command::Index {
            train,
            out,
            strategy,
        } => model::index_cmd(&train, &out, strategy.resolve(), &config),
        Command::Train {
            train,
            vocab_out,
            model_out,
            merges,
            order,
        } => model::train_cmd(
            &train,
            &vocab_out,
            &model_out,
            merges.unwrap_or(config.merges),
            order.unwrap_or(config.order),
            &config,
        ),
        Command::Complete {
            engine,
            test,
            out,
            index,
            vocab,
            model,
            ratio,
            history,
            beam,
            max_new_tokens,
            replay,
            record,
            interactive,
            repo,
            diff_file,
            message_file,
        } => {
            if let Some(beam) = beam {
                config.beam_width = beam;
            }
            if let Some(budget) = max_new_tokens {
                config.max_new_tokens = budget;
            }
            config.check()?;
            let artifacts = EngineArtifacts {
                index: index.as_deref(),
                vocab: vocab.as_deref(),
                model: model.as_deref(),
                replay: replay.as_deref(),
                record: record.as_deref(),
            };
            let loaded = load_engine(engine, &artifacts, &config)?;
            let use_history = history || config.use_history;
            if interactive {
                run_interactive_command(
                    &loaded,
                    repo.as_deref(),
                    diff_file.as_deref(),
                    message_file.as_deref(),
                    use_history,
                    &config,
                )
            } else {
                let test = test.ok_or_else(|| {
                    CliError::usage("batch completion requires --test (or pass --interactive)")
                })?;
                let out = out
                    .ok_or_else(|| CliError::usage("batch completion requires --out"))?;
                let ratio = ratio.unwrap_or(config.context_ratio);
                complete::complete_cmd(
                    &loaded,
                    engine,
                    &test,
                    &out,
                    ratio,
                    use_history,
                    record.as_deref(),
                    &config,
                )
            }
        }
        Command::Evaluate {
            predictions,
            out,
            csv,
            label,
        } => report::evaluate_cmd(
            &predictions,
            out.as_deref(),
            csv.as_deref(),
            label.as_deref(),
            &config,
        ),
        Command::Compare {
            a,
            b,
            metric,
            resamples,
            confidence,
            seed,
        } => report::compare_cmd(
            &a,
            &b,
            metric.into(),
            resamples,
            confidence,
            seed.unwrap_or(config.seed),
        ),
    }
}

/// The interactive half of the `complete` command: resolve the diff and
/// history from the repository, then run the suggestion loop on stdio.
fn run_interactive_command(
    engine: &engine::LoadedEngine,
    repo: Option<&Path>,
    diff_file: Option<&Path>,
    message_file: Option<&Path>,
    use_history: bool,
    config: &RunConfig,
) -> CliResult<()> {
    let repo = repo.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let diff = match diff_file {
        Some(path) => {
            error::require_exists(path)?;
            std::fs::read_to_string(path)?
        }
        None => interactive::staged_diff(&repo)?,
    };
    let history = if use_history {
        interactive::author_history(&repo, config.history_cap)?
    } else {
        Vec::new()
    };
    let options = InteractiveOptions {
        use_history,
        history,
        message_file,
        config,
    };
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout();
    interactive::run_interactive(engine, &diff, &options, stdin.lock(), &mut stdout)?;
    Ok(())
}

/// Convenience used by tests and the binary: run straight from argv.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
