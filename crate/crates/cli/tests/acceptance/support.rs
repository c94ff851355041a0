//! Shared plumbing: a `git fast-import` harness for synthesizing
//! repositories and a runner for the compiled `comet` binary.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

/// One synthesized commit for [`RepoBuilder::commit`].
pub struct CommitSpec<'a> {
    pub author_name: &'a str,
    pub author_email: &'a str,
    pub timestamp: i64,
    pub message: &'a str,
    /// `(path, content)` pairs written by this commit.
    pub files: Vec<(String, String)>,
    /// Branch the commit lands on.
    pub branch: &'a str,
    /// Explicit first parent (a commit mark), for starting branches.
    pub from: Option<usize>,
    /// Extra parent (a commit mark), making this a merge commit.
    pub merge: Option<usize>,
}

impl<'a> CommitSpec<'a> {
    /// A plain single-author commit on `main`.
    pub fn plain(
        author_name: &'a str,
        author_email: &'a str,
        timestamp: i64,
        message: &'a str,
        files: Vec<(String, String)>,
    ) -> CommitSpec<'a> {
        CommitSpec {
            author_name,
            author_email,
            timestamp,
            message,
            files,
            branch: "main",
            from: None,
            merge: None,
        }
    }
}

/// Accumulates a `git fast-import` stream and materializes it as a real
/// repository, giving full control over hashes, authors, and timestamps.
pub struct RepoBuilder {
    path: PathBuf,
    stream: Vec<u8>,
    next_mark: usize,
}

impl RepoBuilder {
    /// Initialize an empty repository at `path` with an `origin` remote
    /// (the remote URL determines the repository's display name).
    pub fn new(path: &Path, origin_url: &str) -> RepoBuilder {
        std::fs::create_dir_all(path).expect("create repo dir");
        git(path, &["init", "-q", "--initial-branch=main"]);
        git(path, &["remote", "add", "origin", origin_url]);
        RepoBuilder {
            path: path.to_path_buf(),
            stream: Vec::new(),
            next_mark: 1,
        }
    }

    fn blob(&mut self, content: &str) -> usize {
        let mark = self.next_mark;
        self.next_mark += 1;
        self.stream
            .extend_from_slice(format!("blob\nmark :{mark}\ndata {}\n", content.len()).as_bytes());
        self.stream.extend_from_slice(content.as_bytes());
        self.stream.push(b'\n');
        mark
    }

    /// Append one commit to the stream; returns its mark for parent links.
    pub fn commit(&mut self, spec: CommitSpec) -> usize {
        let blobs: Vec<(String, usize)> = spec
            .files
            .iter()
            .map(|(path, content)| (path.clone(), self.blob(content)))
            .collect();
        let mark = self.next_mark;
        self.next_mark += 1;
        let mut block = format!(
            "commit refs/heads/{}\nmark :{mark}\n",
            spec.branch
        );
        let who = format!(
            "{} <{}> {} +0000\n",
            spec.author_name, spec.author_email, spec.timestamp
        );
        block.push_str(&format!("author {who}committer {who}"));
        block.push_str(&format!("data {}\n{}\n", spec.message.len(), spec.message));
        if let Some(from) = spec.from {
            block.push_str(&format!("from :{from}\n"));
        }
        if let Some(merge) = spec.merge {
            block.push_str(&format!("merge :{merge}\n"));
        }
        for (path, blob) in blobs {
            block.push_str(&format!("M 100644 :{blob} {path}\n"));
        }
        block.push('\n');
        self.stream.extend_from_slice(block.as_bytes());
        mark
    }

    /// Feed the stream to `git fast-import` and return the repository path.
    pub fn finish(self) -> PathBuf {
        let mut child = Command::new("git")
            .arg("-C")
            .arg(&self.path)
            .args(["fast-import", "--quiet"])
            .stdin(Stdio::piped())
            .stdout(Stdio::null())
            .stderr(Stdio::piped())
            .spawn()
            .expect("spawn git fast-import");
        child
            .stdin
            .as_mut()
            .expect("stdin piped")
            .write_all(&self.stream)
            .expect("write fast-import stream");
        let out = child.wait_with_output().expect("wait for fast-import");
        assert!(
            out.status.success(),
            "fast-import failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        self.path
    }
}

fn git(repo: &Path, args: &[&str]) {
    let out = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(args)
        .output()
        .expect("run git");
    assert!(
        out.status.success(),
        "git {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

/// Run the compiled `comet` binary; panics unless it exits 0.
pub fn comet(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_comet"))
        .args(args)
        .output()
        .expect("run comet");
    assert!(
        out.status.success(),
        "comet {args:?} failed with {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// Path → &str for argument lists.
pub fn arg(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}
