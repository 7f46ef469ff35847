//! Versioned JSON result documents.

use std::fs;
use std::path::{Path, PathBuf};

use leakaudit_core::sim::{CategoricalWorld, SweepPoint, ValidityReport};
use leakaudit_core::{AuditConfig, AuditResult, O1Result};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: &str = "1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: String,
    pub tool_version: String,
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub payload: Payload,
}

impl ResultDocument {
    pub fn new(seed: Option<u64>, payload: Payload) -> Self {
        Self { schema_version: SCHEMA_VERSION.into(), tool_version: TOOL_VERSION.into(), seed, payload }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Audit { inputs: AuditInputs, audit_result: AuditResult },
    O1 { inputs: O1Inputs, o1_result: O1Result },
    Simulation { report: SimulationReport },
    ValidateBounds { report: ValidationReport },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditInputs {
    pub baseline: String,
    pub mia: String,
    pub records: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct O1Inputs {
    pub scores: String,
    pub records: usize,
    pub grid: usize,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub preset: String,
    pub world: CategoricalWorld,
    pub true_c: f64,
    pub config: AuditConfig,
    pub validity: ValidityReport,
    /// `beta + 2 * sqrt(beta (1 - beta) / trials)`
    pub validity_cap: f64,
    pub sweep_trials_per_level: Option<u64>,
    pub sweep: Option<Vec<SweepPoint>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: u64,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
    pub soundness: ValidityReport,
    pub soundness_cap: f64,
    pub soundness_passed: bool,
    pub passed: bool,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("result contains non-finite numbers: {0}")]
    Serialize(serde_json::Error),
}

pub fn to_json(doc: &ResultDocument) -> Result<String, DocumentError> {
    let mut s = serde_json::to_string_pretty(doc).map_err(DocumentError::Serialize)?;
    s.push('\n');
    Ok(s)
}

/// Serialize fully, then write to a sibling file and rename it into place,
/// so a failed run never leaves a truncated document at `path`.
pub fn write_result(doc: &ResultDocument, path: &Path) -> Result<(), DocumentError> {
    let text = to_json(doc)?;
    let werr = |source| DocumentError::Write { path: path.to_owned(), source };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text).map_err(werr)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        werr(e)
    })
}

pub fn read_result(path: &Path) -> Result<ResultDocument, DocumentError> {
    let text = fs::read_to_string(path).map_err(|source| DocumentError::Read { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| DocumentError::Parse { path: path.to_owned(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use leakaudit_core::{measure, o1_measure, ScoreRecord};

    fn audit_doc() -> ResultDocument {
        let noise = |i: usize| ((i * 7919) % 1000) as f64 / 1000.0;
        let recs: Vec<_> = (0..400).map(|i| ScoreRecord::new(format!("r{i}"), noise(i), i % 2 == 1)).collect();
        let mia: Vec<_> =
            recs.iter().enumerate().map(|(i, r)| ScoreRecord { score: noise(i * 3 + 1) + 2.0 * (r.member as u8) as f64, ..r.clone() }).collect();
        let res = measure(&recs, &mia, &AuditConfig::default()).unwrap();
        ResultDocument::new(
            None,
            Payload::Audit { inputs: AuditInputs { baseline: "b.jsonl".into(), mia: "m.jsonl".into(), records: 400 }, audit_result: res },
        )
    }

    #[test]
    fn write_then_read_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("result.json");
        let doc = audit_doc();
        write_result(&doc, &path).unwrap();
        assert_eq!(read_result(&path).unwrap(), doc);
        assert!(!dir.path().join("result.json.partial").exists());

        let recs: Vec<_> = (0..50).map(|i| ScoreRecord::new(format!("{i}"), i as f64, i < 20)).collect();
        let o1 = ResultDocument::new(
            Some(3),
            Payload::O1 {
                inputs: O1Inputs { scores: "s.csv".into(), records: 50, grid: 10, beta: 0.05 },
                o1_result: o1_measure(&recs, 10, 0.05).unwrap(),
            },
        );
        write_result(&o1, &path).unwrap();
        assert_eq!(read_result(&path).unwrap(), o1);
    }

    #[test]
    fn schema_version_and_precision() {
        let doc = audit_doc();
        let text = to_json(&doc).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["kind"], "audit");
        let eps = v["audit_result"]["eps_tilde"].as_f64().unwrap();
        // shortest round-trip formatting keeps every digit of the value
        assert_eq!(eps, doc_eps(&doc));
        assert!(eps > 0.0);
        let printed = text.lines().find(|l| l.contains("\"eps_tilde\"")).unwrap();
        let digits = printed.split('.').nth(1).unwrap().trim_end_matches(',').len();
        assert!(digits >= 6, "{printed}");
    }

    fn doc_eps(doc: &ResultDocument) -> f64 {
        match &doc.payload {
            Payload::Audit { audit_result, .. } => audit_result.eps_tilde,
            _ => unreachable!(),
        }
    }

    #[test]
    fn unwritable_path_is_an_error() {
        let doc = audit_doc();
        assert!(matches!(
            write_result(&doc, Path::new("/nonexistent-dir/x/result.json")),
            Err(DocumentError::Write { .. })
        ));
    }
}
