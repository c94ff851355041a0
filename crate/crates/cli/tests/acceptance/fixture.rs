//! The hand-crafted fixture corpus for the pipeline golden test.
//!
//! The main repository holds exactly 50 commits with every edge the
//! pipeline must handle, each dropped (or transformed) by a known stage:
//!
//! - 1 merge commit — never mined (`git log --no-merges`);
//! - 2 bot-authored commits (`deploy bot`, `release[bot]`) — bots stage;
//! - 3 exact duplicates (identical message, distinct diffs) — duplicates
//!   stage keeps the earliest;
//! - 2 non-ASCII messages — messages stage;
//! - 1 revert (message begins `Revert "`) — messages stage;
//! - 1 whitespace-only diff — survives, demonstrating whitespace collapse
//!   in diff normalization;
//! - 1 URL and 1 issue reference in otherwise clean messages — survive with
//!   the reference stripped.
//!
//! Two three-commit satellite repositories accompany it because splitting
//! is repository-level and needs at least three repositories. All authors,
//! timestamps, and contents are pinned, so commit hashes — and therefore
//! the processed output — are byte-stable across runs.

use std::path::{Path, PathBuf};

use crate::support::{CommitSpec, RepoBuilder};

/// Total commits in the main repository (including the merge).
pub const MAIN_COMMITS: usize = 50;
/// Commits mined from the corpus: 49 from main (merge excluded) + 6 satellite.
pub const MINED: usize = 55;
/// Dropped by the messages stage: two non-ASCII + one revert.
pub const DROPPED_MESSAGES: usize = 3;
/// Dropped by the duplicates stage: two of the three exact duplicates.
pub const DROPPED_DUPLICATES: usize = 2;
/// Dropped by the bots stage.
pub const DROPPED_BOTS: usize = 2;
/// Records surviving the full pipeline.
pub const SURVIVORS: usize = MINED - DROPPED_MESSAGES - DROPPED_DUPLICATES - DROPPED_BOTS;
/// Split seed pinned for the golden files.
pub const SPLIT_SEED: u64 = 5;

const T0: i64 = 1_577_836_800; // 2020-01-01 00:00:00 UTC

fn rev(name: &str, version: usize) -> String {
    format!("{name} revision {version}\nshared fixture line\n")
}

/// Build the three fixture repositories under `dir`; returns their paths.
pub fn build(dir: &Path) -> Vec<PathBuf> {
    vec![main_repo(dir), satellite_a(dir), satellite_b(dir)]
}

fn main_repo(dir: &Path) -> PathBuf {
    let mut repo = RepoBuilder::new(
        &dir.join("fixture-main"),
        "https://example.com/acme/fixture-main.git",
    );
    let casey = ("Casey Hobbs", "casey@example.com");
    let rowan = ("Rowan Petty", "rowan@example.com");
    let counter = std::cell::Cell::new(0i64);
    let next_ts = || {
        let i = counter.get();
        counter.set(i + 1);
        T0 + i * 60
    };
    let plain = |repo: &mut RepoBuilder,
                 author: (&str, &str),
                 message: &str,
                 files: Vec<(String, String)>| {
        repo.commit(CommitSpec::plain(author.0, author.1, next_ts(), message, files))
    };

    // 1-6: scaffolding plus the URL-bearing message (survives, URL stripped).
    plain(&mut repo, casey, "Create parser scaffolding for option handling", vec![("src/parser.py".into(), rev("parser", 1))]);
    plain(&mut repo, rowan, "Add core limits module", vec![("src/core.py".into(), "limit = 1\nwindow = 4\n".into())]);
    plain(&mut repo, casey, "Add tokenizer states for quoted spans", vec![("src/tokenizer.py".into(), rev("tokenizer", 1))]);
    plain(&mut repo, rowan, "Document retry flow per https://example.com/kb/42 for operators", vec![("README.md".into(), rev("readme", 1))]);
    plain(&mut repo, casey, "Normalize cache key casing", vec![("src/cache.py".into(), rev("cache", 1))]); // duplicate #1 (keeper)
    plain(&mut repo, rowan, "Refine prompt assembly for nested templates", vec![("src/prompt.py".into(), rev("prompt", 1))]);

    // 7-11: the other two duplicates, two non-ASCII messages, one revert.
    plain(&mut repo, casey, "Normalize cache key casing", vec![("src/cache.py".into(), rev("cache", 2))]); // duplicate #2
    plain(&mut repo, rowan, "Añadir validación de esquema", vec![("src/schema.py".into(), rev("schema", 1))]);
    plain(&mut repo, casey, "Normalize cache key casing", vec![("src/cache.py".into(), rev("cache", 3))]); // duplicate #3
    plain(&mut repo, rowan, "Revert \"Refine prompt assembly for nested templates\"", vec![("src/prompt.py".into(), rev("prompt", 2))]);
    plain(&mut repo, casey, "修复解析器缓存问题", vec![("src/cache.py".into(), rev("cache", 4))]);

    // 12: whitespace-only diff (spacing change in core.py, survives).
    plain(&mut repo, rowan, "Align assignment spacing in core module", vec![("src/core.py".into(), "limit  =  1\nwindow = 4\n".into())]);

    // 13-14: bot-authored commits.
    plain(&mut repo, ("deploy bot", "deploy@example.com"), "Publish nightly artifacts for pipeline", vec![(".ci/nightly.yml".into(), rev("nightly", 1))]);
    plain(&mut repo, ("release[bot]", "release@users.noreply.github.com"), "Prepare release notes for milestone", vec![("notes/release.md".into(), rev("notes", 1))]);

    // 15: issue reference stripped by message cleaning.
    plain(&mut repo, casey, "Tighten parser limits reported in #204", vec![("src/parser.py".into(), rev("parser", 2))]);

    // 16-44: ordinary commits.
    plain(&mut repo, rowan, "Validate option groups before dispatch", vec![("src/parser.py".into(), rev("parser", 3))]);
    plain(&mut repo, casey, "Cache token spans for replay", vec![("src/tokenizer.py".into(), rev("tokenizer", 2))]);
    plain(&mut repo, rowan, "Trim trailing separators in cache keys", vec![("src/cache.py".into(), rev("cache", 5))]);
    plain(&mut repo, casey, "Guard empty prompt sections", vec![("src/prompt.py".into(), rev("prompt", 3))]);
    plain(&mut repo, rowan, "Split schema loaders by version", vec![("src/schema.py".into(), rev("schema", 2))]);
    plain(&mut repo, casey, "Batch manifest writes during export", vec![("src/export.py".into(), rev("export", 1))]);
    plain(&mut repo, rowan, "Rework span merging for overlaps", vec![("src/tokenizer.py".into(), rev("tokenizer", 3))]);
    plain(&mut repo, casey, "Lower default window for polling", vec![("src/core.py".into(), "limit  =  1\nwindow = 3\n".into())]);
    plain(&mut repo, rowan, "Introduce retry budget for fetchers", vec![("src/fetch.py".into(), rev("fetch", 1))]);
    plain(&mut repo, casey, "Sort export columns for stable output", vec![("src/export.py".into(), rev("export", 2))]);
    plain(&mut repo, rowan, "Harden fetch timeouts under load", vec![("src/fetch.py".into(), rev("fetch", 2))]);
    plain(&mut repo, casey, "Expand parser coverage for escapes", vec![("src/parser.py".into(), rev("parser", 4))]);
    plain(&mut repo, rowan, "Serialize manifest locking for writers", vec![("src/export.py".into(), rev("export", 3))]);
    plain(&mut repo, casey, "Prune stale sessions on shutdown", vec![("src/core.py".into(), "limit  =  1\nwindow = 3\nsessions = []\n".into())]);
    plain(&mut repo, rowan, "Annotate spans with source offsets", vec![("src/tokenizer.py".into(), rev("tokenizer", 4))]);
    plain(&mut repo, casey, "Unify error labels across loaders", vec![("src/schema.py".into(), rev("schema", 3))]);
    plain(&mut repo, rowan, "Defer prompt rendering until send", vec![("src/prompt.py".into(), rev("prompt", 4))]);
    plain(&mut repo, casey, "Coalesce duplicate fetch requests", vec![("src/fetch.py".into(), rev("fetch", 3))]);
    plain(&mut repo, rowan, "Track cache hit ratios per region", vec![("src/cache.py".into(), rev("cache", 6))]);
    plain(&mut repo, casey, "Simplify option parsing fallbacks", vec![("src/parser.py".into(), rev("parser", 5))]);
    plain(&mut repo, rowan, "Rotate session tokens on resume", vec![("src/core.py".into(), "limit  =  1\nwindow = 3\nsessions = []\nrotate = True\n".into())]);
    plain(&mut repo, casey, "Archive export manifests weekly", vec![("src/export.py".into(), rev("export", 4))]);
    plain(&mut repo, rowan, "Probe scheduler drift in tests", vec![("tests/test_sched.py".into(), rev("sched", 1))]);
    plain(&mut repo, casey, "Relax quoting rules for bare words", vec![("src/tokenizer.py".into(), rev("tokenizer", 5))]);
    plain(&mut repo, rowan, "Stream large exports in chunks", vec![("src/export.py".into(), rev("export", 5))]);
    plain(&mut repo, casey, "Enforce schema defaults on load", vec![("src/schema.py".into(), rev("schema", 4))]);
    plain(&mut repo, rowan, "Pin prompt version in headers", vec![("src/prompt.py".into(), rev("prompt", 5))]);
    plain(&mut repo, casey, "Surface fetch errors with context", vec![("src/fetch.py".into(), rev("fetch", 4))]);
    let fork_point = plain(&mut repo, rowan, "Balance cache shards by key range", vec![("src/cache.py".into(), rev("cache", 7))]);

    // 45-47: a side branch, a mainline commit, and the merge.
    let side = repo.commit(CommitSpec {
        author_name: casey.0,
        author_email: casey.1,
        timestamp: next_ts(),
        message: "Add probe for side channel timing",
        files: vec![("src/probe.py".into(), rev("probe", 1))],
        branch: "side",
        from: Some(fork_point),
        merge: None,
    });
    plain(&mut repo, rowan, "Add mainline probe for queue depth", vec![("src/depth.py".into(), rev("depth", 1))]);
    repo.commit(CommitSpec {
        author_name: casey.0,
        author_email: casey.1,
        timestamp: next_ts(),
        message: "Merge branch side into main",
        files: vec![("src/probe.py".into(), rev("probe", 1))],
        branch: "main",
        from: None,
        merge: Some(side),
    });

    // 48-50: post-merge commits.
    plain(&mut repo, casey, "Report mining throughput in logs", vec![("src/core.py".into(), "limit  =  1\nwindow = 3\nsessions = []\nrotate = True\nthroughput_log = True\n".into())]);
    plain(&mut repo, rowan, "Dedupe overlapping manifest rows", vec![("src/export.py".into(), rev("export", 6))]);
    plain(&mut repo, casey, "Finalize option docs for parser", vec![("README.md".into(), rev("readme", 2))]);

    assert_eq!(counter.get() as usize, MAIN_COMMITS, "main repo commit count");
    repo.finish()
}

fn satellite_a(dir: &Path) -> PathBuf {
    let mut repo = RepoBuilder::new(
        &dir.join("fixture-sat-a"),
        "https://example.com/acme/fixture-sat-a.git",
    );
    let jude = ("Jude Fern", "jude@example.com");
    let messages_files = [
        ("Wire metrics export for gauges", "src/metrics.py", "metrics"),
        ("Cap retry budget for pollers", "src/poller.py", "poller"),
        ("Trim stale locks in scheduler", "src/sched.py", "sched"),
    ];
    for (j, (message, path, name)) in messages_files.iter().enumerate() {
        repo.commit(CommitSpec::plain(
            jude.0,
            jude.1,
            T0 + 100_000 + j as i64 * 60,
            message,
            vec![((*path).into(), rev(name, 1))],
        ));
    }
    repo.finish()
}

fn satellite_b(dir: &Path) -> PathBuf {
    let mut repo = RepoBuilder::new(
        &dir.join("fixture-sat-b"),
        "https://example.com/acme/fixture-sat-b.git",
    );
    let mika = ("Mika Sorrel", "mika@example.com");
    let messages_files = [
        ("Route audit events to sink", "src/audit.py", "audit"),
        ("Gate config reloads behind flag", "src/reload.py", "reload"),
        ("Sort manifest keys for stability", "src/manifest.py", "manifest"),
    ];
    for (j, (message, path, name)) in messages_files.iter().enumerate() {
        repo.commit(CommitSpec::plain(
            mika.0,
            mika.1,
            T0 + 150_000 + j as i64 * 60,
            message,
            vec![((*path).into(), rev(name, 1))],
        ));
    }
    repo.finish()
}
