//! Shared helpers: fixtures on disk and a wrapper around the binary.

#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use biblio_core::corpus::{write_jsonl, Corpus};
use tempfile::TempDir;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn biblio(args: &[&str]) -> Run {
    biblio_env(args, &[])
}

pub fn biblio_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_biblio"));
    cmd.args(args).env_remove("BIBLIO_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Writes the corpus as JSONL into a fresh temporary directory.
pub fn on_disk(corpus: &Corpus) -> TempDir {
    let dir = tempfile::tempdir().expect("tempdir");
    write_jsonl(corpus, dir.path()).expect("fixture writes");
    dir
}

pub fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

pub fn json(run: &Run) -> serde_json::Value {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", run.stdout))
}
