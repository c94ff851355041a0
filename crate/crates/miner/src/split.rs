//! Repository-level dataset splitting.
//!
//! Commits are assigned to train/validation/test by repository, never by
//! individual commit, so no repository's history straddles a boundary.

use std::collections::{BTreeSet, HashMap};

use comet_core::DatasetSplit;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::MinerError;
use crate::raw::RawCommit;

/// Fractions of repositories assigned to train and validation; the rest
/// go to test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    /// Fraction of repositories for the training split.
    pub train: f64,
    /// Fraction of repositories for the validation split.
    pub validation: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.8,
            validation: 0.1,
        }
    }
}

impl SplitRatios {
    fn validate(&self) -> Result<(), MinerError> {
        let test = 1.0 - self.train - self.validation;
        if !(self.train > 0.0 && self.validation > 0.0 && test > 1e-9) {
            return Err(MinerError::BadRatios(self.train + self.validation));
        }
        Ok(())
    }
}

/// Split commits into train/validation/test by repository.
///
/// Distinct repository names are sorted, shuffled with a seeded generator,
/// and assigned: the first `floor(train * n)` repositories to train, the
/// next `floor(validation * n)` to validation, and the remainder to test.
/// Commit order within each split follows the input. Errors when fewer
/// than three repositories are present or the ratios leave no room for a
/// test split.
pub fn split_by_repository(
    commits: Vec<RawCommit>,
    ratios: SplitRatios,
    seed: u64,
) -> Result<HashMap<DatasetSplit, Vec<RawCommit>>, MinerError> {
    ratios.validate()?;
    let repos: BTreeSet<&str> = commits.iter().map(|c| c.repo.as_str()).collect();
    let n = repos.len();
    if n < 3 {
        return Err(MinerError::TooFewRepositories(n));
    }
    let mut ordered: Vec<String> = repos.into_iter().map(str::to_string).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ordered.shuffle(&mut rng);

    let train_count = (ratios.train * n as f64).floor() as usize;
    let validation_count = (ratios.validation * n as f64).floor() as usize;
    let mut assignment: HashMap<&str, DatasetSplit> = HashMap::new();
    for (i, repo) in ordered.iter().enumerate() {
        let split = if i < train_count {
            DatasetSplit::Train
        } else if i < train_count + validation_count {
            DatasetSplit::Validation
        } else {
            DatasetSplit::Test
        };
        assignment.insert(repo, split);
    }

    let mut out: HashMap<DatasetSplit, Vec<RawCommit>> = HashMap::new();
    out.insert(DatasetSplit::Train, Vec::new());
    out.insert(DatasetSplit::Validation, Vec::new());
    out.insert(DatasetSplit::Test, Vec::new());
    for commit in commits {
        let split = assignment[commit.repo.as_str()];
        out.get_mut(&split).expect("all splits present").push(commit);
    }
    Ok(out)
}
