//! Dataset records, tolerant loading and canonical saving, corpus
//! statistics, inter-annotator agreement and subtask-dataset construction.

mod io;
mod kappa;
mod stats;
mod subtasks;

pub use io::{load_dataset, save_dataset, IssueSeverity, LoadIssue, LoadedDataset};
pub use kappa::cohens_kappa;
pub use stats::{compute_stats, CorpusStats, NodeCounts};
pub use subtasks::{build_subtasks, write_subtasks, NgRecord, SubtaskSets, TaRecord, TeRecord};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::MdtNode;

/// One dataset record: source text plus its decision tree as a preorder
/// node sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdtRecord {
    pub id: String,
    pub text: String,
    pub tree: Vec<MdtNode>,
}

/// Errors from dataset handling and agreement computation.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("schema error at line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("validation failed for record {id:?}: {message}")]
    Validation { id: String, message: String },
    #[error("label sequences differ in length: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("empty input")]
    EmptyInput,
}
