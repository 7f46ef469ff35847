use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use leakaudit_core::rng::derive_seed;
use leakaudit_core::sim::{make_world_sample, CategoricalWorld};
use leakaudit_core::ScoreRecord;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_leakaudit"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn write_jsonl(path: &Path, records: &[ScoreRecord]) {
    let mut s = String::new();
    for r in records {
        let _ = writeln!(s, r#"{{"id":"{}","score":{:?},"member":{}}}"#, r.id, r.score, r.member);
    }
    fs::write(path, s).unwrap();
}

pub fn write_csv(path: &Path, records: &[ScoreRecord]) {
    let mut s = String::from("id,score,member\n");
    for r in records {
        let _ = writeln!(s, "{},{:?},{}", r.id, r.score, r.member as u8);
    }
    fs::write(path, s).unwrap();
}

/// Baseline (JSONL) and attack (CSV) score files from a leaking synthetic world.
pub fn score_files(dir: &Path, m: usize) -> (PathBuf, PathBuf) {
    let world = CategoricalWorld { m, ..CategoricalWorld::default_world().with_separation(2.0) };
    let s = make_world_sample(&world, derive_seed(11, 0)).unwrap();
    let (b, a) = (dir.join("baseline.jsonl"), dir.join("mia.csv"));
    write_jsonl(&b, &s.baseline_records);
    write_csv(&a, &s.mia_records);
    (b, a)
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Loss-style scores (lower means member) from the same world, for `o1`.
pub fn loss_file(dir: &Path, m: usize) -> PathBuf {
    let world = CategoricalWorld { m, ..CategoricalWorld::default_world().with_separation(2.0) };
    let s = make_world_sample(&world, derive_seed(11, 0)).unwrap();
    let losses: Vec<_> = s.mia_records.iter().map(|r| ScoreRecord { score: -r.score, ..r.clone() }).collect();
    let path = dir.join("loss.jsonl");
    write_jsonl(&path, &losses);
    path
}
