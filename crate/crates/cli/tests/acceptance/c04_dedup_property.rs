//! Criterion 4: after deduplication of a 10,000-record corpus with injected
//! duplicates, no two survivors share a message MD5 or a diff MD5, and the
//! survivor choice agrees with an independent transitive-group oracle on
//! 100 randomly sampled duplicate groups.

use std::collections::{HashMap, HashSet};

use comet_core::{render_diff, ChangeType, FileModification};
use comet_miner::{deduplicate, RawCommit};
use md5::{Digest, Md5};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pass;

fn synthetic(i: usize) -> RawCommit {
    RawCommit {
        hash: format!("{i:040x}"),
        repo: format!("acme/synth{}", i % 7),
        author_name: format!("Dev {}", i % 23),
        author_email: format!("dev{}@example.com", i % 23),
        timestamp: 1_600_000_000 + i as i64,
        language: "Python".into(),
        message: format!("Adjust module {i} for stable output"),
        mods: vec![FileModification {
            change_type: ChangeType::Modify,
            old_path: Some(format!("src/f_{i}.py")),
            new_path: Some(format!("src/f_{i}.py")),
            diff: format!("-value = {i}\n+value = {}\n", i + 1),
        }],
    }
}

fn md5_hex(text: &str) -> String {
    format!("{:x}", Md5::digest(text.as_bytes()))
}

/// Independent grouping oracle: records are nodes; exact message equality
/// and exact rendered-diff equality are edges; groups are the connected
/// components (breadth-first search over string-keyed adjacency, no MD5).
fn oracle_groups(records: &[RawCommit]) -> Vec<Vec<usize>> {
    let mut by_message: HashMap<&str, Vec<usize>> = HashMap::new();
    let mut rendered: Vec<String> = Vec::with_capacity(records.len());
    let mut by_diff: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, record) in records.iter().enumerate() {
        by_message.entry(&record.message).or_default().push(i);
        let diff = render_diff(&record.mods);
        by_diff.entry(diff.clone()).or_default().push(i);
        rendered.push(diff);
    }
    let mut group_of = vec![usize::MAX; records.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..records.len() {
        if group_of[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = Vec::new();
        let mut queue = vec![start];
        group_of[start] = id;
        while let Some(node) = queue.pop() {
            members.push(node);
            let neighbors = by_message[records[node].message.as_str()]
                .iter()
                .chain(by_diff[&rendered[node]].iter());
            for &next in neighbors {
                if group_of[next] == usize::MAX {
                    group_of[next] = id;
                    queue.push(next);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    groups
}

#[test]
fn c04_dedup_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut records: Vec<RawCommit> = (0..10_000).map(synthetic).collect();

    // Inject message duplicates, diff duplicates, and three-record chains
    // (A~B by message, B~C by diff) that only transitive grouping catches.
    for _ in 0..600 {
        let from = rng.gen_range(0..records.len());
        let to = rng.gen_range(0..records.len());
        records[to].message = records[from].message.clone();
    }
    for _ in 0..400 {
        let from = rng.gen_range(0..records.len());
        let to = rng.gen_range(0..records.len());
        records[to].mods = records[from].mods.clone();
    }
    for _ in 0..100 {
        let a = rng.gen_range(0..records.len());
        let b = rng.gen_range(0..records.len());
        let c = rng.gen_range(0..records.len());
        records[b].message = records[a].message.clone();
        records[c].mods = records[b].mods.clone();
    }

    let survivors = deduplicate(records.clone());
    assert!(!survivors.is_empty());

    let mut message_digests = HashSet::new();
    let mut diff_digests = HashSet::new();
    for survivor in &survivors {
        assert!(
            message_digests.insert(md5_hex(&survivor.message)),
            "two survivors share a message MD5: {:?}",
            survivor.message
        );
        assert!(
            diff_digests.insert(md5_hex(&render_diff(&survivor.mods))),
            "two survivors share a diff MD5 ({})",
            survivor.hash
        );
    }

    // Oracle agreement on 100 random non-trivial groups: each group keeps
    // exactly its earliest (timestamp, hash) member.
    let survivor_hashes: HashSet<&str> = survivors.iter().map(|r| r.hash.as_str()).collect();
    let groups = oracle_groups(&records);
    let non_trivial: Vec<&Vec<usize>> = groups.iter().filter(|g| g.len() > 1).collect();
    assert!(
        non_trivial.len() >= 100,
        "expected at least 100 duplicate groups, got {}",
        non_trivial.len()
    );
    for _ in 0..100 {
        let group = non_trivial[rng.gen_range(0..non_trivial.len())];
        let keeper = group
            .iter()
            .min_by_key(|&&i| (records[i].timestamp, records[i].hash.clone()))
            .copied()
            .expect("non-empty group");
        for &member in group {
            let kept = survivor_hashes.contains(records[member].hash.as_str());
            assert_eq!(
                kept,
                member == keeper,
                "group keeper mismatch: member {member}, oracle keeper {keeper}"
            );
        }
    }
    pass(4, "dedup-property");
}
