//! Evaluation-set subsampling.
//!
//! The full test split is too large (and too skewed toward giant
//! repositories) for evaluation, so two benchmark subsets are drawn from
//! it deterministically.

use std::collections::{BTreeMap, HashMap, HashSet};

use comet_core::CommitRecord;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::MinerError;
use crate::outliers::nearest_rank;

/// Which benchmark subset to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsampleMode {
    /// General evaluation set: drop outsized repositories, then cap each
    /// language by sampling whole repositories.
    CmgTest,
    /// Author-focused set for completion with history: a few authors per
    /// language, each with a moderate commit count.
    LlmTest,
}

/// Knobs for [`subsample_eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsampleOptions {
    /// Base seed; each language derives its own generator from it.
    pub seed: u64,
    /// Commit cap per language before repository sampling kicks in
    /// (`CmgTest`).
    pub language_cap: usize,
    /// Repositories sampled per over-cap language (`CmgTest`).
    pub repos_per_language: usize,
    /// Authors sampled per language (`LlmTest`).
    pub authors_per_language: usize,
    /// Author commit-count eligibility range, inclusive (`LlmTest`).
    pub min_author_commits: usize,
    /// See `min_author_commits`.
    pub max_author_commits: usize,
}

impl Default for SubsampleOptions {
    fn default() -> Self {
        SubsampleOptions {
            seed: 0,
            language_cap: 20_000,
            repos_per_language: 17,
            authors_per_language: 10,
            min_author_commits: 10,
            max_author_commits: 50,
        }
    }
}

/// FNV-1a hash, used to derive a per-language seed from the base seed.
fn fnv1a64(text: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in text.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn language_rng(seed: u64, language: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(fnv1a64(language)))
}

/// Draw a benchmark subset from evaluation records.
///
/// `CmgTest` first removes repositories whose commit count is strictly
/// above the 95th percentile (nearest rank) of the per-repository count
/// distribution, then for each language still over `language_cap` keeps
/// only a seeded sample of `repos_per_language` repositories. `LlmTest`
/// keeps, per language, all commits of up to `authors_per_language`
/// sampled authors whose commit count lies in
/// `[min_author_commits, max_author_commits]`.
///
/// Languages are processed in sorted order with per-language derived
/// seeds, so the draw is stable under reordering of unrelated languages.
/// Output preserves input order. Errors on empty input.
pub fn subsample_eval(
    records: &[CommitRecord],
    mode: SubsampleMode,
    options: &SubsampleOptions,
) -> Result<Vec<CommitRecord>, MinerError> {
    if records.is_empty() {
        return Err(MinerError::EmptyInput("subsample"));
    }
    match mode {
        SubsampleMode::CmgTest => Ok(cmg_test(records, options)),
        SubsampleMode::LlmTest => Ok(llm_test(records, options)),
    }
}

fn cmg_test(records: &[CommitRecord], options: &SubsampleOptions) -> Vec<CommitRecord> {
    let mut per_repo: HashMap<&str, usize> = HashMap::new();
    for r in records {
        *per_repo.entry(r.repo.as_str()).or_default() += 1;
    }
    let mut counts: Vec<usize> = per_repo.values().copied().collect();
    counts.sort_unstable();
    let p95 = nearest_rank(&counts, 95.0);
    let survivors: Vec<&CommitRecord> = records
        .iter()
        .filter(|r| per_repo[r.repo.as_str()] <= p95)
        .collect();

    // Per-language repository sampling for languages still over the cap.
    let mut by_language: BTreeMap<&str, Vec<&CommitRecord>> = BTreeMap::new();
    for r in &survivors {
        by_language.entry(r.language.as_str()).or_default().push(r);
    }
    let mut keep_repos: HashSet<(&str, &str)> = HashSet::new();
    for (language, commits) in &by_language {
        let mut repos: Vec<&str> = commits
            .iter()
            .map(|r| r.repo.as_str())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        repos.sort_unstable();
        let chosen: Vec<&str> = if commits.len() > options.language_cap {
            let mut rng = language_rng(options.seed, language);
            repos
                .choose_multiple(&mut rng, options.repos_per_language)
                .copied()
                .collect()
        } else {
            repos
        };
        for repo in chosen {
            keep_repos.insert((language, repo));
        }
    }

    survivors
        .into_iter()
        .filter(|r| keep_repos.contains(&(r.language.as_str(), r.repo.as_str())))
        .cloned()
        .collect()
}

fn llm_test(records: &[CommitRecord], options: &SubsampleOptions) -> Vec<CommitRecord> {
    type AuthorKey<'a> = (&'a str, u64);
    let mut per_author: HashMap<AuthorKey, usize> = HashMap::new();
    for r in records {
        *per_author.entry((r.repo.as_str(), r.author_id)).or_default() += 1;
    }
    let mut by_language: BTreeMap<&str, Vec<AuthorKey>> = BTreeMap::new();
    for r in records {
        let key = (r.repo.as_str(), r.author_id);
        let count = per_author[&key];
        if (options.min_author_commits..=options.max_author_commits).contains(&count) {
            by_language.entry(r.language.as_str()).or_default().push(key);
        }
    }

    let mut keep_authors: HashSet<AuthorKey> = HashSet::new();
    for (language, authors) in &mut by_language {
        authors.sort_unstable();
        authors.dedup();
        let mut rng = language_rng(options.seed, language);
        for key in authors.choose_multiple(&mut rng, options.authors_per_language) {
            keep_authors.insert(*key);
        }
    }

    records
        .iter()
        .filter(|r| keep_authors.contains(&(r.repo.as_str(), r.author_id)))
        .cloned()
        .collect()
}
