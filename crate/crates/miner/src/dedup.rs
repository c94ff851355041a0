//! Near-duplicate removal.
//!
//! Commits are grouped transitively: two commits belong together when they
//! share a message digest or a rendered-diff digest. One commit per group
//! survives.

use std::collections::HashMap;

use comet_core::render_diff;
use md5::{Digest, Md5};

use crate::raw::RawCommit;

/// Disjoint-set forest over commit indices.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn md5_hex(bytes: &[u8]) -> String {
    let mut hasher = Md5::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

/// Which commits survive duplicate-group resolution, by position.
///
/// Commits sharing an MD5 digest of the message or of the rendered diff
/// are grouped transitively; the keeper of each group is the commit with
/// the earliest timestamp (hash as the tiebreak).
pub(crate) fn keeper_flags(commits: &[RawCommit]) -> Vec<bool> {
    let n = commits.len();
    let mut uf = UnionFind::new(n);
    let mut by_message: HashMap<String, usize> = HashMap::new();
    let mut by_diff: HashMap<String, usize> = HashMap::new();
    for (i, commit) in commits.iter().enumerate() {
        let message_digest = md5_hex(commit.message.as_bytes());
        let diff_digest = md5_hex(render_diff(&commit.mods).as_bytes());
        if let Some(&first) = by_message.get(&message_digest) {
            uf.union(i, first);
        } else {
            by_message.insert(message_digest, i);
        }
        if let Some(&first) = by_diff.get(&diff_digest) {
            uf.union(i, first);
        } else {
            by_diff.insert(diff_digest, i);
        }
    }

    let mut keeper_of_root: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let root = uf.find(i);
        let entry = keeper_of_root.entry(root).or_insert(i);
        let current = &commits[*entry];
        let candidate = &commits[i];
        if (candidate.timestamp, &candidate.hash) < (current.timestamp, &current.hash) {
            *entry = i;
        }
    }

    let mut keep = vec![false; n];
    for &idx in keeper_of_root.values() {
        keep[idx] = true;
    }
    keep
}

/// Remove duplicate commits across the whole corpus.
///
/// Commits sharing an MD5 digest of the message or of the rendered diff
/// are grouped transitively; the keeper of each group is the commit with
/// the earliest timestamp (hash as the tiebreak). Output preserves the
/// input order of the keepers.
pub fn deduplicate(commits: Vec<RawCommit>) -> Vec<RawCommit> {
    let keep = keeper_flags(&commits);
    commits
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect()
}
