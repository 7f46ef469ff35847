//! Score files: one record per line (JSONL) or per row (CSV with an
//! `id,score,member` header).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use leakaudit_core::ScoreRecord;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreFormat {
    Jsonl,
    Csv,
}

impl ScoreFormat {
    /// `.csv` is CSV; everything else is read as JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => ScoreFormat::Csv,
            _ => ScoreFormat::Jsonl,
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: column `{column}`: {message}")]
    Malformed { path: PathBuf, line: u64, column: String, message: String },
    #[error("{path}:{line}: duplicate id {id:?}")]
    DuplicateId { path: PathBuf, line: u64, id: String },
}

struct RowError {
    column: &'static str,
    message: String,
}

fn row_err(column: &'static str, message: impl Into<String>) -> RowError {
    RowError { column, message: message.into() }
}

fn parse_score(text: &str) -> Result<f64, RowError> {
    let x: f64 = text.trim().parse().map_err(|_| row_err("score", format!("{text:?} is not a number")))?;
    if !x.is_finite() {
        return Err(row_err("score", format!("{text:?} is not finite")));
    }
    Ok(x)
}

fn parse_member(text: &str) -> Result<bool, RowError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "true" | "1" => Ok(true),
        "false" | "0" => Ok(false),
        _ => Err(row_err("member", format!("{text:?} is not a boolean or 0/1"))),
    }
}

fn json_record(line: &str) -> Result<ScoreRecord, RowError> {
    let value: Value = serde_json::from_str(line).map_err(|e| row_err("<line>", e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| row_err("<line>", "expected a JSON object"))?;
    let id = match obj.get("id") {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        Some(_) => return Err(row_err("id", "expected a string")),
        None => return Err(row_err("id", "missing")),
    };
    let score = match obj.get("score") {
        Some(Value::Number(n)) => n.as_f64().ok_or_else(|| row_err("score", "not representable"))?,
        Some(Value::String(s)) => parse_score(s)?,
        Some(_) => return Err(row_err("score", "expected a number")),
        None => return Err(row_err("score", "missing")),
    };
    let member = match obj.get("member") {
        Some(Value::Bool(b)) => *b,
        Some(Value::Number(n)) => parse_member(&n.to_string())?,
        Some(Value::String(s)) => parse_member(s)?,
        Some(_) => return Err(row_err("member", "expected a boolean or 0/1")),
        None => return Err(row_err("member", "missing")),
    };
    Ok(ScoreRecord { id, score, member })
}

struct Collector<'a> {
    path: &'a Path,
    seen: HashMap<String, u64>,
    records: Vec<ScoreRecord>,
}

impl Collector<'_> {
    fn push(&mut self, line: u64, row: Result<ScoreRecord, RowError>) -> Result<(), LoadError> {
        let rec = row.map_err(|e| LoadError::Malformed {
            path: self.path.to_owned(),
            line,
            column: e.column.to_owned(),
            message: e.message,
        })?;
        if self.seen.insert(rec.id.clone(), line).is_some() {
            return Err(LoadError::DuplicateId { path: self.path.to_owned(), line, id: rec.id });
        }
        self.records.push(rec);
        Ok(())
    }
}

/// Read every record in file order. Blank JSONL lines are skipped.
pub fn load_scores(path: &Path, format: ScoreFormat) -> Result<Vec<ScoreRecord>, LoadError> {
    let io_err = |source| LoadError::Io { path: path.to_owned(), source };
    let file = File::open(path).map_err(io_err)?;
    let mut out = Collector { path, seen: HashMap::new(), records: Vec::new() };
    match format {
        ScoreFormat::Jsonl => {
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(io_err)?;
                if line.trim().is_empty() {
                    continue;
                }
                out.push(i as u64 + 1, json_record(&line))?;
            }
        }
        ScoreFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
            let headers = reader.headers().map_err(|e| csv_malformed(path, 1, e))?.clone();
            let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
            let (Some(id_col), Some(score_col), Some(member_col)) = (col("id"), col("score"), col("member")) else {
                return Err(LoadError::Malformed {
                    path: path.to_owned(),
                    line: 1,
                    column: "<header>".into(),
                    message: "header must name id, score and member".into(),
                });
            };
            for row in reader.records() {
                let row = row.map_err(|e| {
                    let line = e.position().map_or(0, |p| p.line());
                    csv_malformed(path, line, e)
                })?;
                let line = row.position().map_or(0, |p| p.line());
                let field = |i: usize, name: &'static str| row.get(i).ok_or_else(|| row_err(name, "missing"));
                let rec = (|| {
                    Ok(ScoreRecord {
                        id: field(id_col, "id")?.to_owned(),
                        score: parse_score(field(score_col, "score")?)?,
                        member: parse_member(field(member_col, "member")?)?,
                    })
                })();
                out.push(line, rec)?;
            }
        }
    }
    Ok(out.records)
}

fn csv_malformed(path: &Path, line: u64, e: csv::Error) -> LoadError {
    LoadError::Malformed { path: path.to_owned(), line, column: "<row>".into(), message: e.to_string() }
}
