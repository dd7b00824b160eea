//! Reading and writing dataset files.
//!
//! The canonical format is one JSON record per line: `{"id": …, "text": …,
//! "tree": [{"role": "C"|"D", "triples": [[subject, relation, object], …],
//! "logic_rel": "and"|"or"|"null"}, …]}` with the tree in preorder. The
//! reader is tolerant: it also accepts a whole-file JSON array, common
//! alternative field spellings, numeric ids (auto-generated when missing),
//! and the Chinese relation labels of the upstream release. The writer
//! always emits the canonical schema, so `load ∘ save` is the identity.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::{DataError, MdtRecord};
use crate::tree::MdtNode;
use crate::validate::{validate_tree, Mode};

/// Whether an issue invalidates the record or is merely advisory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IssueSeverity {
    Violation,
    Warning,
}

/// One problem found while loading, tied to a record and input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadIssue {
    pub record_id: String,
    /// 1-based input line (0 for records from a whole-file JSON array).
    pub line: usize,
    pub severity: IssueSeverity,
    pub message: String,
}

/// A loaded dataset plus everything worth telling the user about it.
#[derive(Debug, Clone, Default)]
pub struct LoadedDataset {
    pub records: Vec<MdtRecord>,
    pub issues: Vec<LoadIssue>,
}

impl LoadedDataset {
    pub fn violation_count(&self) -> usize {
        self.issues
            .iter()
            .filter(|i| i.severity == IssueSeverity::Violation)
            .count()
    }
}

/// Accepted spellings for each record field, beyond the canonical name.
#[derive(Debug, Deserialize)]
struct RawRecord {
    #[serde(default, alias = "ID", alias = "doc_id", alias = "example_id")]
    id: Option<Value>,
    #[serde(default, alias = "sentence", alias = "doc", alias = "source_text")]
    text: Option<String>,
    #[serde(default, alias = "nodes", alias = "mdt", alias = "decision_tree")]
    tree: Option<Vec<MdtNode>>,
    #[serde(flatten)]
    extra: BTreeMap<String, Value>,
}

/// Loads a dataset file and validates every record. Strict mode fails on
/// the first invalid record; lenient mode keeps all records and collects
/// violations and warnings as issues instead.
pub fn load_dataset(path: impl AsRef<Path>, mode: Mode) -> Result<LoadedDataset, DataError> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset(&content, mode)
}

/// As [`load_dataset`] over in-memory content.
pub fn parse_dataset(content: &str, mode: Mode) -> Result<LoadedDataset, DataError> {
    let trimmed = content.trim_start();
    // Whole-file JSON array fallback.
    if trimmed.starts_with('[') {
        let values: Vec<Value> = serde_json::from_str(content).map_err(|e| DataError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        return assemble(values.into_iter().map(|v| (0usize, v)), mode);
    }
    let mut rows = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(line).map_err(|e| DataError::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        rows.push((idx + 1, value));
    }
    assemble(rows.into_iter(), mode)
}

fn assemble(
    rows: impl Iterator<Item = (usize, Value)>,
    mode: Mode,
) -> Result<LoadedDataset, DataError> {
    let mut out = LoadedDataset::default();
    for (ordinal, (line, value)) in rows.enumerate() {
        let record = record_from_value(value, line, ordinal, &mut out.issues)?;
        check_record(&record, line, mode, &mut out.issues)?;
        out.records.push(record);
    }
    Ok(out)
}

fn record_from_value(
    value: Value,
    line: usize,
    ordinal: usize,
    issues: &mut Vec<LoadIssue>,
) -> Result<MdtRecord, DataError> {
    let raw: RawRecord = serde_json::from_value(value).map_err(|e| DataError::Schema {
        line,
        message: e.to_string(),
    })?;
    let id = match raw.id {
        Some(Value::String(s)) => s,
        Some(Value::Number(n)) => n.to_string(),
        Some(other) => {
            return Err(DataError::Schema {
                line,
                message: format!("record id must be a string or number, got {other}"),
            })
        }
        // Auto-generated, stable by position in the file.
        None => format!("r{}", ordinal + 1),
    };
    let text = raw.text.ok_or_else(|| DataError::Schema {
        line,
        message: format!("record {id:?} is missing the text field"),
    })?;
    let tree = raw.tree.ok_or_else(|| DataError::Schema {
        line,
        message: format!("record {id:?} is missing the tree field"),
    })?;
    for key in raw.extra.keys() {
        issues.push(LoadIssue {
            record_id: id.clone(),
            line,
            severity: IssueSeverity::Warning,
            message: format!("unmapped field {key:?} ignored"),
        });
    }
    Ok(MdtRecord { id, text, tree })
}

fn check_record(
    record: &MdtRecord,
    line: usize,
    mode: Mode,
    issues: &mut Vec<LoadIssue>,
) -> Result<(), DataError> {
    let mut violations = Vec::new();
    if record.text.is_empty() {
        violations.push("[empty-text] record text is empty".to_string());
    }
    match validate_tree(&record.tree, mode) {
        Ok(report) => {
            for v in &report.violations {
                violations.push(issue_text(v));
            }
            for w in &report.warnings {
                issues.push(LoadIssue {
                    record_id: record.id.clone(),
                    line,
                    severity: IssueSeverity::Warning,
                    message: issue_text(w),
                });
            }
        }
        Err(e) => violations.push(format!("[malformed-tree] {e}")),
    }
    match mode {
        Mode::Strict if !violations.is_empty() => Err(DataError::Validation {
            id: record.id.clone(),
            message: violations.join("; "),
        }),
        _ => {
            issues.extend(violations.into_iter().map(|message| LoadIssue {
                record_id: record.id.clone(),
                line,
                severity: IssueSeverity::Violation,
                message,
            }));
            Ok(())
        }
    }
}

fn issue_text(v: &crate::validate::Violation) -> String {
    match v.node {
        Some(i) => format!("[{}] node {}: {}", v.rule, i, v.message),
        None => format!("[{}] {}", v.rule, v.message),
    }
}

/// Writes records in the canonical line-delimited schema. Deterministic and
/// byte-stable: loading the output and saving it again reproduces the file.
pub fn save_dataset(path: impl AsRef<Path>, records: &[MdtRecord]) -> Result<(), DataError> {
    let path = path.as_ref();
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serialization cannot fail"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })
}
