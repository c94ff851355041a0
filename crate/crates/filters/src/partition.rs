use comet_core::CommitRecord;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::FilterConfig;
use crate::predicates::FilterVerdict;
use crate::FilterError;

/// Evaluation subsets for comparing filtered against unfiltered data.
///
/// `filtered` holds records fitting all of {first sentence only, V-DO,
/// diff length}; `out_of_filters` holds records fitting none of the three;
/// `random` is a seeded sample of the full input sized to match `filtered`.
#[derive(Debug, Clone)]
pub struct SubsetPartition {
    pub filtered: Vec<CommitRecord>,
    pub out_of_filters: Vec<CommitRecord>,
    pub random: Vec<CommitRecord>,
}

/// Partition records by the three-filter rule and draw the size-matched
/// random subset (without replacement, deterministic per seed).
pub fn partition_by_filters(
    records: &[CommitRecord],
    config: &FilterConfig,
    seed: u64,
) -> Result<SubsetPartition, FilterError> {
    let mut filtered = Vec::new();
    let mut out_of_filters = Vec::new();
    for record in records {
        let verdict = FilterVerdict::of(record, config);
        if verdict.fits_all() {
            filtered.push(record.clone());
        } else if verdict.fits_none() {
            out_of_filters.push(record.clone());
        }
    }
    if filtered.is_empty() {
        return Err(FilterError::EmptyFilteredSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random: Vec<CommitRecord> = records
        .choose_multiple(&mut rng, filtered.len())
        .cloned()
        .collect();
    Ok(SubsetPartition {
        filtered,
        out_of_filters,
        random,
    })
}
