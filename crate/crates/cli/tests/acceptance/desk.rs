//! The desk-scale corpus shared by criteria 6, 7, and 9.
//!
//! Twenty real git repositories (210 commits each) are synthesized with
//! `git fast-import`, mined with the real miner, processed into splits, and
//! indexed/trained once. The generator shapes the corpus so the paper's
//! qualitative findings are reproducible at desk scale:
//!
//! - Twelve message families: six verb-led (V-DO passers) at 36% volume and
//!   six tag-led (V-DO failers) at 64%. Verb families form three pairs with a
//!   shared four-character stem (`supp`, `coll`, `rest`), so a 25% prefix of
//!   their 18–19-char messages cuts inside the shared stem — ambiguous — while
//!   a 50% prefix resolves the pair.
//! - 8% of commits are "twins": their diff is written in the paired family's
//!   vocabulary, guaranteeing some retrieval confusion at low context.
//! - 17% of messages carry a second sentence, 7% exceed the message-length
//!   cap, and 84% of diffs exceed the diff-length cap, reproducing the
//!   paper's filter-restrictiveness ordering.
//!
//! Build time is recorded so criterion 6 can charge it against its budget.

use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::support::{arg, comet, CommitSpec, RepoBuilder};

pub const REPOS: usize = 20;
pub const COMMITS_PER_REPO: usize = 210;
pub const SPLIT_SEED: u64 = 11;

struct Family {
    /// First word of every message in the family.
    head: &'static str,
    /// Verb families: the object word. Tag families: a three-word phrase.
    stem: &'static str,
    /// Index of the paired family (shared diff vocabulary, shared 25% cut
    /// for verb pairs).
    pair: usize,
    /// Whether `head` is a V-DO verb.
    verb: bool,
    /// Diff phrases exclusive to this family (four words each).
    exclusive: [&'static str; 3],
}

const FAMILIES: [Family; 12] = [
    Family {
        head: "support",
        stem: "queue",
        pair: 1,
        verb: true,
        exclusive: [
            "chunked upload retry gate",
            "presign grant flow window",
            "mirror segment audit hook",
        ],
    },
    Family {
        head: "suppress",
        stem: "noise",
        pair: 0,
        verb: true,
        exclusive: [
            "muted warning class table",
            "threshold gate noise floor",
            "silence filter rule chain",
        ],
    },
    Family {
        head: "collect",
        stem: "stats",
        pair: 3,
        verb: true,
        exclusive: [
            "metric sample ring buffer",
            "counter scrape batch pass",
            "gauge export sink pump",
        ],
    },
    Family {
        head: "collapse",
        stem: "forms",
        pair: 2,
        verb: true,
        exclusive: [
            "frame fold stack pass",
            "nested region merge walk",
            "span group squash step",
        ],
    },
    Family {
        head: "restore",
        stem: "caches",
        pair: 5,
        verb: true,
        exclusive: [
            "snapshot load rollback path",
            "checkpoint replay warm start",
            "backup fetch verify stage",
        ],
    },
    Family {
        head: "restrict",
        stem: "flags",
        pair: 4,
        verb: true,
        exclusive: [
            "scope guard permit check",
            "quota clamp limit probe",
            "policy fence deny rule",
        ],
    },
    Family {
        head: "tests:",
        stem: "stabilize flaky ingest",
        pair: 7,
        verb: false,
        exclusive: [
            "flaky ingest smoke suite",
            "fixture seed replay case",
            "harness retry jitter knob",
        ],
    },
    Family {
        head: "testing:",
        stem: "rebalance shard probes",
        pair: 6,
        verb: false,
        exclusive: [
            "shard probe balance sweep",
            "matrix lane split runner",
            "stress loop soak signal",
        ],
    },
    Family {
        head: "docs:",
        stem: "clarify setup steps",
        pair: 9,
        verb: false,
        exclusive: [
            "setup guide step table",
            "quickstart page anchor move",
            "glossary entry cross link",
        ],
    },
    Family {
        head: "docker:",
        stem: "trim layer caching",
        pair: 8,
        verb: false,
        exclusive: [
            "layer cache trim order",
            "image stage prune pass",
            "context copy mask rule",
        ],
    },
    Family {
        head: "deps:",
        stem: "pin transitive ranges",
        pair: 11,
        verb: false,
        exclusive: [
            "range pin lock audit",
            "resolver graph dedupe walk",
            "advisory bump sweep check",
        ],
    },
    Family {
        head: "infra:",
        stem: "rotate alert routes",
        pair: 10,
        verb: false,
        exclusive: [
            "alert route rotate plan",
            "pager map shift window",
            "oncall sync drift guard",
        ],
    },
];

/// One shared phrase pool per family pair (both members draw from it).
const PAIR_SHARED: [[&str; 2]; 6] = [
    ["transfer queue drain loop", "backlog window flush timer"],
    ["series bucket walk order", "window chunk merge range"],
    ["state gate check ledger", "handle scope audit trail"],
    ["runner seed matrix table", "suite lane retry budget"],
    ["page layer order marker", "anchor mask copy ruler"],
    ["graph route sweep ledger", "shift audit trail marker"],
];

const GLOBAL_FILLER: [&str; 3] = [
    "common logging setup line",
    "shared config parse step",
    "util path join helper",
];

const LONG_FILLER: [&str; 10] = [
    "across", "batch", "cycles", "during", "evening", "flow", "guard", "hourly", "interval",
    "jitter",
];

fn pick_family(rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    if u < 0.36 {
        // Six verb families at 6% each.
        ((u / 0.06) as usize).min(5)
    } else {
        // Six tag families sharing the remaining 64%.
        6 + (((u - 0.36) / (0.64 / 6.0)) as usize).min(5)
    }
}

fn message(family: &Family, ordinal: usize, style: f64, rng: &mut ChaCha8Rng) -> String {
    let core = if family.verb {
        format!("{} {} {ordinal:04}", family.head, family.stem)
    } else {
        format!("{} {} case {ordinal:04}", family.head, family.stem)
    };
    if style < 0.07 {
        // Message-length failer: 33+ tokens, single sentence.
        let start = rng.gen_range(0..LONG_FILLER.len());
        let filler: Vec<&str> = (0..27).map(|i| LONG_FILLER[(start + i) % 10]).collect();
        format!(
            "{} {} sweep covering {} case {ordinal:04}",
            family.head,
            family.stem,
            filler.join(" ")
        )
    } else if style < 0.24 {
        // First-sentence failer: a second sentence after the core.
        format!("{core}. Also tidy the nearby helpers.")
    } else {
        core
    }
}

fn diff_content(family: &Family, pair_idx: usize, ordinal: usize, long: bool, twin: bool, rng: &mut ChaCha8Rng) -> String {
    // Twins describe their change in the paired family's vocabulary,
    // guaranteeing retrieval confusion within the pair at low context.
    let source = if twin { &FAMILIES[family.pair] } else { family };
    let lines = if long {
        rng.gen_range(28..=42)
    } else {
        rng.gen_range(12..=20)
    };
    let offset = rng.gen_range(0..3usize);
    let mut out = String::new();
    for j in 0..lines {
        let line = match j % 20 {
            0..=7 => source.exclusive[(j + offset) % 3].to_string(),
            8..=13 => PAIR_SHARED[pair_idx][(j + offset) % 2].to_string(),
            14..=16 => GLOBAL_FILLER[(j + offset) % 3].to_string(),
            _ => format!("case {ordinal:04} marker {j} probe"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Everything criteria 6/7/9 need, built once.
pub struct DeskCorpus {
    #[allow(dead_code)]
    root: tempfile::TempDir,
    pub out_dir: PathBuf,
    pub index: PathBuf,
    pub vocab: PathBuf,
    pub model: PathBuf,
    /// Seconds spent synthesizing, mining, processing, and training.
    pub build_secs: f64,
}

impl DeskCorpus {
    pub fn split(&self, name: &str) -> PathBuf {
        self.out_dir.join(format!("{name}.jsonl"))
    }

    /// A fresh scratch directory under the corpus root.
    pub fn scratch(&self, label: &str) -> PathBuf {
        let dir = self.root.path().join("scratch").join(label);
        std::fs::create_dir_all(&dir).expect("create scratch dir");
        dir
    }
}

static DESK: OnceLock<DeskCorpus> = OnceLock::new();

pub fn desk() -> &'static DeskCorpus {
    DESK.get_or_init(build)
}

fn build() -> DeskCorpus {
    let started = Instant::now();
    let root = tempfile::tempdir().expect("create corpus root");
    let mut rng = ChaCha8Rng::seed_from_u64(90210);

    let mut repo_paths = Vec::new();
    let mut ordinal = 0usize;
    for r in 0..REPOS {
        let path = root.path().join("repos").join(format!("repo{r:02}"));
        let mut builder = RepoBuilder::new(&path, &format!("https://example.com/desk/repo{r:02}.git"));
        for k in 0..COMMITS_PER_REPO {
            let fi = pick_family(&mut rng);
            let family = &FAMILIES[fi];
            let pair_idx = fi.min(family.pair) / 2;
            let style: f64 = rng.gen();
            let long_diff = rng.gen::<f64>() < 0.84;
            let twin = rng.gen::<f64>() < 0.08;
            let msg = message(family, ordinal, style, &mut rng);
            let content = diff_content(family, pair_idx, ordinal, long_diff, twin, &mut rng);
            let slug = family.head.trim_end_matches(':');
            let author = k % 3;
            builder.commit(CommitSpec::plain(
                &format!("Dev {r:02} {}", ["alpha", "beta", "gamma"][author]),
                &format!("dev{r:02}{}@example.com", ["a", "b", "c"][author]),
                1_600_000_000 + r as i64 * 250_000 + k as i64 * 900,
                &msg,
                vec![(format!("src/{slug}/f_{ordinal:04}.py"), content)],
            ));
            ordinal += 1;
        }
        repo_paths.push(builder.finish());
    }

    let raw = root.path().join("raw.jsonl");
    let mut mine_args: Vec<String> = vec!["mine".into()];
    for path in &repo_paths {
        mine_args.push("--repo".into());
        mine_args.push(arg(path).into());
    }
    mine_args.push("--out".into());
    mine_args.push(arg(&raw).into());
    let mine_refs: Vec<&str> = mine_args.iter().map(String::as_str).collect();
    comet(&mine_refs);

    let out_dir = root.path().join("processed");
    comet(&[
        "process",
        "--input",
        arg(&raw),
        "--out-dir",
        arg(&out_dir),
        "--train-ratio",
        "0.4",
        "--validation-ratio",
        "0.1",
        "--low-percentile",
        "0",
        "--high-percentile",
        "100",
        "--seed",
        &SPLIT_SEED.to_string(),
    ]);

    let train = out_dir.join("train.jsonl");
    let index = root.path().join("index.bin");
    let vocab = root.path().join("vocab.bin");
    let model = root.path().join("model.bin");
    comet(&["index", "--train", arg(&train), "--out", arg(&index)]);
    comet(&[
        "train",
        "--train",
        arg(&train),
        "--vocab-out",
        arg(&vocab),
        "--model-out",
        arg(&model),
        "--merges",
        "120",
        "--order",
        "3",
    ]);

    DeskCorpus {
        out_dir,
        index,
        vocab,
        model,
        build_secs: started.elapsed().as_secs_f64(),
        root,
    }
}
