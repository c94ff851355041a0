//! Interactive completion against the staged changes of a local
//! repository: type a prefix, pick or extend ranked suggestions, and walk
//! away with an assembled commit message.

use std::io::{BufRead, Write};
use std::path::Path;
use std::process::Command;

use comet_engines::CompletionRequest;

use crate::config::RunConfig;
use crate::engine::LoadedEngine;
use crate::error::{CliError, CliResult};

/// How many ranked suggestions each round shows at most.
const SUGGESTION_LIMIT: usize = 3;

/// Inputs for one interactive session.
pub struct InteractiveOptions<'a> {
    /// Whether the engine sees the author's past messages.
    pub use_history: bool,
    /// The author's past messages, oldest first.
    pub history: Vec<String>,
    /// Write the assembled message here (e.g. for a commit hook).
    pub message_file: Option<&'a Path>,
    /// Engine parameters.
    pub config: &'a RunConfig,
}

/// The staged diff of `repo`, or an error when nothing is staged.
pub fn staged_diff(repo: &Path) -> CliResult<String> {
    let output = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(["diff", "--cached", "--no-color"])
        .output()
        .map_err(|e| CliError::data(format!("cannot run git: {e}")))?;
    if !output.status.success() {
        return Err(CliError::data(format!(
            "git diff failed in {}: {}",
            repo.display(),
            String::from_utf8_lossy(&output.stderr).trim()
        )));
    }
    let diff = String::from_utf8_lossy(&output.stdout).into_owned();
    if diff.trim().is_empty() {
        return Err(CliError::usage(
            "no staged changes; stage files or pass --diff-file",
        ));
    }
    Ok(diff)
}

/// The configured author's past messages in `repo`, oldest first.
///
/// Messages are read from the local log filtered by the repository's
/// `user.email`; an unset email yields no history.
pub fn author_history(repo: &Path, cap: usize) -> CliResult<Vec<String>> {
    let email = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(["config", "user.email"])
        .output()
        .map_err(|e| CliError::data(format!("cannot run git: {e}")))?;
    let email = String::from_utf8_lossy(&email.stdout).trim().to_string();
    if email.is_empty() {
        return Ok(Vec::new());
    }
    let log = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args([
            "log",
            "--no-merges",
            "--reverse",
            &format!("--author={email}"),
            "--format=%B%x1e",
        ])
        .output()
        .map_err(|e| CliError::data(format!("cannot run git: {e}")))?;
    if !log.status.success() {
        return Err(CliError::data(format!(
            "git log failed in {}: {}",
            repo.display(),
            String::from_utf8_lossy(&log.stderr).trim()
        )));
    }
    let body = String::from_utf8_lossy(&log.stdout);
    let messages: Vec<String> = body
        .split('\u{1e}')
        .map(str::trim)
        .filter(|m| !m.is_empty())
        .map(str::to_string)
        .collect();
    let start = messages.len().saturating_sub(cap);
    Ok(messages[start..].to_vec())
}

/// Run the suggestion loop over any reader and writer.
///
/// Each round completes the current prefix and shows up to three ranked
/// suggestions. A number picks one (finishing with prefix plus its
/// continuation), any other text extends the prefix and re-completes, and
/// an empty line finishes with the prefix as typed.
pub fn run_interactive<R: BufRead, W: Write>(
    engine: &LoadedEngine,
    diff: &str,
    options: &InteractiveOptions,
    input: R,
    out: &mut W,
) -> CliResult<String> {
    let mut prefix = String::new();
    let mut lines = input.lines();
    let message = loop {
        let mut request = CompletionRequest::new(diff, prefix.clone());
        request.max_new_tokens = options.config.max_new_tokens;
        request.context_budget_tokens = options.config.context_budget_tokens;
        request.use_history = options.use_history;
        request.history = options.history.clone();
        let suggestions = engine
            .suggestions(&request, SUGGESTION_LIMIT)
            .map_err(|e| CliError::data(e.to_string()))?;
        writeln!(out, "prefix: {prefix}")?;
        for (i, suggestion) in suggestions.iter().enumerate() {
            let note = if suggestion.prefix_honored || prefix.is_empty() {
                ""
            } else {
                "  [prefix not matched]"
            };
            writeln!(out, "  {}. {}{note}", i + 1, suggestion.full_message)?;
        }
        write!(out, "> ")?;
        out.flush()?;

        let line = match lines.next() {
            Some(line) => line?,
            None => break prefix,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            break prefix;
        }
        if let Ok(choice) = trimmed.parse::<usize>() {
            if (1..=suggestions.len()).contains(&choice) {
                break suggestions[choice - 1].full_message.clone();
            }
        }
        prefix.push_str(&line);
    };
    writeln!(out, "message: {message}")?;
    if let Some(path) = options.message_file {
        std::fs::write(path, format!("{message}\n"))?;
    }
    Ok(message)
}
