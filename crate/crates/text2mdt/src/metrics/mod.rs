//! Evaluation metrics for MDT extraction: strict triplet P/R/F1,
//! permutation-minimized node-grouping edit distance and Levenshtein ratio,
//! exact tree accuracy, decision-path F1 and tree Levenshtein ratio, plus the
//! record-level aggregation that produces evaluation reports.

mod compare;
mod edit;
mod ng;
mod report;
mod tuple;

pub use compare::{dp_f1, tree_acc, tree_lr, triplet_prf};
pub use edit::{edit_distance, Atom, AtomKind};
pub use ng::{ng_ed, ng_ed_groups, ng_lr, ng_lr_groups};
pub use report::{evaluate, EvalConfig, EvalReport, LrConvention, Prf, RecordScores};
pub use tuple::{group_tuple, node_tuple, tree_tuple};

use thiserror::Error;

/// Errors raised by metric computation. Bad *scores* are never errors; these
/// cover inputs the metrics cannot be computed on at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("permutation search supports at most 12 gold nodes, got {count}")]
    PermutationLimitExceeded { count: usize },
    #[error("record ids do not align between prediction and gold: {0}")]
    IdMismatch(String),
    #[error("node group has no role but role atoms were requested")]
    MissingRole,
    #[error("no records to evaluate")]
    EmptyInput,
}
