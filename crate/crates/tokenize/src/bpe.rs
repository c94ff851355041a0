use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::TokenizeError;

/// Padding token id.
pub const PAD: u32 = 0;
/// End-of-sequence token id.
pub const EOS: u32 = 1;
/// Separator token id, placed between history messages and before the prefix.
pub const SEP: u32 = 2;
/// Unknown-symbol token id; appears only for non-ASCII input.
pub const UNK: u32 = 3;

const SPECIAL_STRS: [&str; 4] = ["[PAD]", "[EOS]", "[SEP]", "[UNK]"];
const FIRST_CHAR: u32 = 4;
const BASE_SIZE: usize = FIRST_CHAR as usize + 128;
const VOCAB_MAGIC: &str = "#bpe-v1";

/// A trained byte-pair vocabulary.
///
/// The token inventory starts from the four specials and the 128 ASCII
/// characters; each learned merge adds the concatenation of its pair (token
/// strings are unique, so a merge whose concatenation already exists reuses
/// the existing id). Spaces are ordinary symbols: merges may span words.
/// Newlines delimit training lines, so no token ever contains one.
#[derive(Debug, Clone)]
pub struct SubwordVocab {
    tokens: Vec<String>,
    token_ids: HashMap<String, u32>,
    merges: Vec<(String, String)>,
    /// rank -> (left id, right id, merged id), aligned with `merges`.
    merge_ids: Vec<(u32, u32, u32)>,
    /// (left id, right id) -> rank of the first merge with that pair.
    ranks: HashMap<(u32, u32), u32>,
}

impl SubwordVocab {
    /// Train a vocabulary on a corpus of text documents.
    ///
    /// Learns `min(merges, available pairs)` merges, most frequent pair
    /// first; ties break lexicographically by the pair's token strings.
    /// Deterministic for a given corpus and merge count.
    pub fn train<I, S>(corpus: I, merges: usize) -> Result<Self, TokenizeError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut trainer = Trainer::new(corpus)?;
        let learned = trainer.run(merges);
        Ok(Self::from_merges(learned).expect("trainer emits valid merges"))
    }

    /// Rebuild a vocabulary from an ordered merge list.
    fn from_merges(merges: Vec<(String, String)>) -> Result<Self, String> {
        let mut vocab = SubwordVocab {
            tokens: Vec::with_capacity(BASE_SIZE + merges.len()),
            token_ids: HashMap::new(),
            merges: Vec::new(),
            merge_ids: Vec::new(),
            ranks: HashMap::new(),
        };
        for s in SPECIAL_STRS {
            vocab.intern(s.to_string());
        }
        for b in 0u8..128 {
            vocab.intern(char::from(b).to_string());
        }
        for (rank, (left, right)) in merges.iter().enumerate() {
            let l = *vocab
                .token_ids
                .get(left)
                .ok_or_else(|| format!("merge {rank}: unknown left token {left:?}"))?;
            let r = *vocab
                .token_ids
                .get(right)
                .ok_or_else(|| format!("merge {rank}: unknown right token {right:?}"))?;
            let merged = vocab.intern(format!("{left}{right}"));
            vocab.ranks.entry((l, r)).or_insert(rank as u32);
            vocab.merge_ids.push((l, r, merged));
        }
        vocab.merges = merges;
        Ok(vocab)
    }

    fn intern(&mut self, s: String) -> u32 {
        if let Some(&id) = self.token_ids.get(&s) {
            return id;
        }
        let id = self.tokens.len() as u32;
        self.token_ids.insert(s.clone(), id);
        self.tokens.push(s);
        id
    }

    fn char_id(&self, c: char) -> u32 {
        if c.is_ascii() {
            FIRST_CHAR + c as u32
        } else {
            UNK
        }
    }

    /// Encode text to token ids by replaying merges lowest rank first.
    /// Non-ASCII characters become [`UNK`]; ASCII text round-trips exactly.
    pub fn encode(&self, text: &str) -> Vec<u32> {
        let mut syms: Vec<u32> = text.chars().map(|c| self.char_id(c)).collect();
        loop {
            let mut best: Option<u32> = None;
            for w in syms.windows(2) {
                if let Some(&rank) = self.ranks.get(&(w[0], w[1])) {
                    if best.map_or(true, |b| rank < b) {
                        best = Some(rank);
                    }
                }
            }
            let Some(rank) = best else { break };
            let (l, r, merged) = self.merge_ids[rank as usize];
            syms = merge_occurrences(&syms, l, r, merged);
        }
        syms
    }

    /// Decode token ids back to text by concatenating token strings.
    pub fn decode(&self, ids: &[u32]) -> Result<String, TokenizeError> {
        let mut out = String::new();
        for &id in ids {
            let s = self
                .tokens
                .get(id as usize)
                .ok_or(TokenizeError::IdOutOfRange {
                    id,
                    size: self.tokens.len(),
                })?;
            out.push_str(s);
        }
        Ok(out)
    }

    /// True when the encoding lost nothing (no [`UNK`] produced).
    pub fn is_lossless(ids: &[u32]) -> bool {
        !ids.contains(&UNK)
    }

    /// Total token inventory size (specials + characters + merged tokens).
    pub fn size(&self) -> usize {
        self.tokens.len()
    }

    /// Number of learned merges.
    pub fn merge_count(&self) -> usize {
        self.merges.len()
    }

    /// The ordered merge list as token-string pairs.
    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    /// String form of a token id, if in range.
    pub fn token_str(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    /// Id of an exact token string, if present in the inventory.
    pub fn id_of(&self, token: &str) -> Option<u32> {
        self.token_ids.get(token).copied()
    }

    /// All (id, string) pairs in id order.
    pub fn iter_tokens(&self) -> impl Iterator<Item = (u32, &str)> {
        self.tokens
            .iter()
            .enumerate()
            .map(|(i, s)| (i as u32, s.as_str()))
    }

    /// Write the vocabulary: a header naming the specials, then one
    /// tab-separated merge pair per line (tokens escaped for tab, newline,
    /// and backslash, since tokens may contain spaces).
    pub fn save(&self, path: &Path) -> Result<(), TokenizeError> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let mut out = BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "{VOCAB_MAGIC}\t{}", SPECIAL_STRS.join("\t"))?;
        for (left, right) in &self.merges {
            writeln!(out, "{}\t{}", escape(left), escape(right))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Load a vocabulary previously written by [`SubwordVocab::save`].
    pub fn load(path: &Path) -> Result<Self, TokenizeError> {
        let file = BufReader::new(std::fs::File::open(path)?);
        let mut lines = file.lines();
        let header = lines
            .next()
            .transpose()?
            .ok_or(TokenizeError::BadVocabFile {
                line: 1,
                detail: "empty file".into(),
            })?;
        let expected = format!("{VOCAB_MAGIC}\t{}", SPECIAL_STRS.join("\t"));
        if header != expected {
            return Err(TokenizeError::BadVocabFile {
                line: 1,
                detail: format!("bad header {header:?}"),
            });
        }
        let mut merges = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            let line_no = i + 2;
            let (left, right) = line.split_once('\t').ok_or(TokenizeError::BadVocabFile {
                line: line_no,
                detail: "expected two tab-separated tokens".into(),
            })?;
            let bad = |detail: String| TokenizeError::BadVocabFile {
                line: line_no,
                detail,
            };
            merges.push((
                unescape(left).map_err(&bad)?,
                unescape(right).map_err(&bad)?,
            ));
        }
        Self::from_merges(merges).map_err(|detail| TokenizeError::BadVocabFile {
            line: 0,
            detail,
        })
    }
}

/// Replace every left-to-right occurrence of the adjacent pair `(l, r)`.
fn merge_occurrences(syms: &[u32], l: u32, r: u32, merged: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(syms.len());
    let mut i = 0;
    while i < syms.len() {
        if i + 1 < syms.len() && syms[i] == l && syms[i + 1] == r {
            out.push(merged);
            i += 2;
        } else {
            out.push(syms[i]);
            i += 1;
        }
    }
    out
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            other => out.push(other),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            other => return Err(format!("bad escape \\{other:?} in {s:?}")),
        }
    }
    Ok(out)
}

/// Incremental BPE trainer: exact pair counts with per-line occurrence sets
/// and a lazily-invalidated heap, so each merge touches only the lines that
/// contain its pair.
struct Trainer {
    tokens: Vec<String>,
    token_ids: HashMap<String, u32>,
    /// Deduplicated corpus lines (symbol ids) with multiplicities.
    lines: Vec<(Vec<u32>, u64)>,
    counts: HashMap<(u32, u32), u64>,
    occurs: HashMap<(u32, u32), HashSet<u32>>,
    heap: BinaryHeap<HeapEntry>,
}

struct HeapEntry {
    count: u64,
    /// Token strings of the pair; smaller sorts first among equal counts.
    strs: (String, String),
    pair: (u32, u32),
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.count
            .cmp(&other.count)
            .then_with(|| other.strs.cmp(&self.strs))
            .then_with(|| other.pair.cmp(&self.pair))
    }
}

impl Trainer {
    fn new<I, S>(corpus: I) -> Result<Self, TokenizeError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut tokens = Vec::with_capacity(BASE_SIZE);
        let mut token_ids = HashMap::new();
        for s in SPECIAL_STRS {
            token_ids.insert(s.to_string(), tokens.len() as u32);
            tokens.push(s.to_string());
        }
        for b in 0u8..128 {
            let s = char::from(b).to_string();
            token_ids.insert(s.clone(), tokens.len() as u32);
            tokens.push(s);
        }

        // Deduplicate lines; BTreeMap gives a stable line order.
        let mut multiplicity: BTreeMap<String, u64> = BTreeMap::new();
        for doc in corpus {
            for line in doc.as_ref().split('\n') {
                if !line.is_empty() {
                    *multiplicity.entry(line.to_string()).or_insert(0) += 1;
                }
            }
        }
        let lines: Vec<(Vec<u32>, u64)> = multiplicity
            .into_iter()
            .map(|(line, mult)| {
                let syms = line
                    .chars()
                    .map(|c| {
                        if c.is_ascii() {
                            FIRST_CHAR + c as u32
                        } else {
                            UNK
                        }
                    })
                    .collect();
                (syms, mult)
            })
            .collect();
        if lines.is_empty() {
            return Err(TokenizeError::EmptyCorpus);
        }

        let mut trainer = Trainer {
            tokens,
            token_ids,
            lines,
            counts: HashMap::new(),
            occurs: HashMap::new(),
            heap: BinaryHeap::new(),
        };
        for idx in 0..trainer.lines.len() {
            let (syms, mult) = trainer.lines[idx].clone();
            for (pair, n) in pair_multiset(&syms) {
                trainer.bump(pair, (n * mult) as i64);
                trainer.occurs.entry(pair).or_default().insert(idx as u32);
            }
        }
        Ok(trainer)
    }

    /// Adjust a pair count and record the new value in the heap.
    fn bump(&mut self, pair: (u32, u32), delta: i64) {
        let entry = self.counts.entry(pair).or_insert(0);
        let next = (*entry as i64 + delta).max(0) as u64;
        if next == 0 {
            self.counts.remove(&pair);
            return;
        }
        *entry = next;
        self.heap.push(HeapEntry {
            count: next,
            strs: (
                self.tokens[pair.0 as usize].clone(),
                self.tokens[pair.1 as usize].clone(),
            ),
            pair,
        });
    }

    /// Pop heap entries until one matches the live count table.
    fn pop_best(&mut self) -> Option<(u32, u32)> {
        while let Some(e) = self.heap.pop() {
            if self.counts.get(&e.pair) == Some(&e.count) {
                return Some(e.pair);
            }
        }
        None
    }

    fn run(&mut self, merges: usize) -> Vec<(String, String)> {
        let mut learned = Vec::new();
        while learned.len() < merges {
            let Some((l, r)) = self.pop_best() else { break };
            let left_str = self.tokens[l as usize].clone();
            let right_str = self.tokens[r as usize].clone();
            let concat = format!("{left_str}{right_str}");
            let merged = match self.token_ids.get(&concat) {
                Some(&id) => id,
                None => {
                    let id = self.tokens.len() as u32;
                    self.token_ids.insert(concat.clone(), id);
                    self.tokens.push(concat);
                    id
                }
            };
            self.apply_merge((l, r), merged);
            learned.push((left_str, right_str));
        }
        learned
    }

    fn apply_merge(&mut self, pair: (u32, u32), merged: u32) {
        let touched = self.occurs.remove(&pair).unwrap_or_default();
        for idx in touched {
            let (old_syms, mult) = self.lines[idx as usize].clone();
            let new_syms = merge_occurrences(&old_syms, pair.0, pair.1, merged);
            let old_pairs = pair_multiset(&old_syms);
            let new_pairs = pair_multiset(&new_syms);
            let keys: HashSet<(u32, u32)> =
                old_pairs.keys().chain(new_pairs.keys()).copied().collect();
            for key in keys {
                let before = old_pairs.get(&key).copied().unwrap_or(0) as i64;
                let after = new_pairs.get(&key).copied().unwrap_or(0) as i64;
                if before == after {
                    continue;
                }
                self.bump(key, (after - before) * mult as i64);
                if key == pair {
                    continue; // occurrence set already removed wholesale
                }
                if before == 0 && after > 0 {
                    self.occurs.entry(key).or_default().insert(idx);
                } else if before > 0 && after == 0 {
                    if let Some(set) = self.occurs.get_mut(&key) {
                        set.remove(&idx);
                    }
                }
            }
            self.lines[idx as usize].0 = new_syms;
        }
    }
}

/// Multiset of adjacent pairs in a symbol sequence, skipping pairs that
/// involve a special token (specials never participate in merges).
fn pair_multiset(syms: &[u32]) -> HashMap<(u32, u32), u64> {
    let mut out = HashMap::new();
    for w in syms.windows(2) {
        if w[0] >= FIRST_CHAR && w[1] >= FIRST_CHAR {
            *out.entry((w[0], w[1])).or_insert(0) += 1;
        }
    }
    out
}
