//! Author handling: bot removal, split-overlap removal, and identity
//! disambiguation.
//!
//! An author identity is the normalized `(name, email)` pair. Two
//! identities are the same person when they share a name or an e-mail
//! address, transitively — a person committing as `(Ann, ann@a.com)` and
//! `(Ann Lee, ann@a.com)` and `(Ann Lee, ann@b.com)` is one identity.

use std::collections::{HashMap, HashSet};

use comet_core::CommitRecord;

use crate::raw::RawCommit;

/// Normalized author identity: lowercased, trimmed `(name, email)`.
type Identity = (String, String);

/// Disjoint-set forest over identity indices.
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

/// Index distinct `(scope, identity)` pairs and union those sharing a
/// name or an e-mail within the same scope. The scope string confines the
/// merge (one repository, or `""` for a global merge).
fn build_identity_groups<I>(identities: I) -> (HashMap<(String, Identity), usize>, UnionFind)
where
    I: Iterator<Item = (String, Identity)>,
{
    let mut index_of: HashMap<(String, Identity), usize> = HashMap::new();
    let mut ordered: Vec<(String, Identity)> = Vec::new();
    for key in identities {
        if !index_of.contains_key(&key) {
            index_of.insert(key.clone(), ordered.len());
            ordered.push(key);
        }
    }
    let mut uf = UnionFind::new(ordered.len());
    let mut by_name: HashMap<(String, String), usize> = HashMap::new();
    let mut by_email: HashMap<(String, String), usize> = HashMap::new();
    for (i, (scope, (name, email))) in ordered.iter().enumerate() {
        if !name.is_empty() {
            match by_name.entry((scope.clone(), name.clone())) {
                std::collections::hash_map::Entry::Occupied(e) => uf.union(i, *e.get()),
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(i);
                }
            }
        }
        if !email.is_empty() {
            match by_email.entry((scope.clone(), email.clone())) {
                std::collections::hash_map::Entry::Occupied(e) => uf.union(i, *e.get()),
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(i);
                }
            }
        }
    }
    (index_of, uf)
}

/// Names and e-mail addresses of known automation accounts.
#[derive(Debug, Clone)]
pub struct BotList {
    entries: HashSet<String>,
}

impl BotList {
    /// The built-in list.
    pub fn builtin() -> BotList {
        Self::from_lines(include_str!("../assets/bots.txt"))
    }

    /// Parse a list from text: one entry per line, `#` comments and blank
    /// lines ignored, entries lowercased.
    pub fn from_lines(text: &str) -> BotList {
        let entries = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        BotList { entries }
    }

    /// Whether the normalized name or e-mail is a known automation account.
    pub fn contains(&self, entry: &str) -> bool {
        self.entries.contains(&entry.trim().to_lowercase())
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether the list is empty.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Whether an author looks like an automation account.
///
/// True when the lowercased name ends with `[bot]`, when its last
/// whitespace-separated token ends with `bot`, or when the name or e-mail
/// appears in the list. The last-token rule accepts rare false positives
/// (a lone "Abbot") in exchange for catching unregistered `*-bot` names.
fn is_bot(name: &str, email: &str, bots: &BotList) -> bool {
    let name = name.trim().to_lowercase();
    if name.ends_with("[bot]") {
        return true;
    }
    if let Some(last) = name.split_whitespace().last() {
        if last.ends_with("bot") {
            return true;
        }
    }
    bots.contains(&name) || bots.contains(email)
}

/// Remove commits authored by automation accounts.
pub fn drop_bot_authors(commits: Vec<RawCommit>, bots: &BotList) -> Vec<RawCommit> {
    commits
        .into_iter()
        .filter(|c| !is_bot(&c.author_name, &c.author_email, bots))
        .collect()
}

/// Remove training commits whose author also appears in validation or
/// test.
///
/// Identities are merged globally (shared name or e-mail, transitively)
/// so an author cannot leak across the boundary under a different alias.
pub fn drop_overlapping_authors(
    train: Vec<RawCommit>,
    validation: &[RawCommit],
    test: &[RawCommit],
) -> Vec<RawCommit> {
    let all = train
        .iter()
        .chain(validation.iter())
        .chain(test.iter())
        .map(|c| (String::new(), c.identity()));
    let (index_of, mut uf) = build_identity_groups(all);

    let mut holdout_roots: HashSet<usize> = HashSet::new();
    for c in validation.iter().chain(test.iter()) {
        let idx = index_of[&(String::new(), c.identity())];
        holdout_roots.insert(uf.find(idx));
    }

    train
        .into_iter()
        .filter(|c| {
            let idx = index_of[&(String::new(), c.identity())];
            !holdout_roots.contains(&uf.find(idx))
        })
        .collect()
}

/// Replace raw author names and e-mails with stable numeric identities.
///
/// Identities are merged per repository (shared name or e-mail,
/// transitively). Numeric ids are assigned by first appearance when
/// commits are ordered by `(repo, timestamp, hash)`, so they are stable
/// across runs. Output records align with the input order.
pub fn merge_author_identities(commits: &[RawCommit]) -> Vec<CommitRecord> {
    let (index_of, mut uf) =
        build_identity_groups(commits.iter().map(|c| (c.repo.clone(), c.identity())));

    let mut order: Vec<usize> = (0..commits.len()).collect();
    order.sort_by(|&a, &b| {
        let ca = &commits[a];
        let cb = &commits[b];
        (&ca.repo, ca.timestamp, &ca.hash).cmp(&(&cb.repo, cb.timestamp, &cb.hash))
    });

    let mut id_of_root: HashMap<usize, u64> = HashMap::new();
    let mut next_id: u64 = 0;
    let mut author_ids = vec![0u64; commits.len()];
    for i in order {
        let commit = &commits[i];
        let root = uf.find(index_of[&(commit.repo.clone(), commit.identity())]);
        let id = *id_of_root.entry(root).or_insert_with(|| {
            let id = next_id;
            next_id += 1;
            id
        });
        author_ids[i] = id;
    }

    commits
        .iter()
        .zip(author_ids)
        .map(|(c, author_id)| CommitRecord {
            hash: c.hash.clone(),
            repo: c.repo.clone(),
            author_id,
            timestamp: c.timestamp,
            language: c.language.clone(),
            message: c.message.clone(),
            mods: c.mods.clone(),
        })
        .collect()
}
