//! JSON container for externally produced score tables.
//!
//! A scores file is one JSON object tagged by `"task"`:
//!
//! * `"ng"` — triplet list plus an `n × n × 3` probability table over the
//!   logical-relation labels (`labels` may list them in any order).
//! * `"tree"` — node skeletons plus an `n × 2` role table (`role_labels`)
//!   and an `n × n × 3` edge table (`edge_labels`, any order).
//! * `"te"` — token list, entity and relation label names, and an
//!   `n × n × (1 + entities + relations)` table whose columns are `null`,
//!   then the entity labels, then the relation labels, in the given order.
//!
//! Probabilities are nested row-major arrays: `probs[i][j]` is the label
//! distribution of cell `(i, j)`. Loaders permute label columns into the
//! decoder's canonical order, so files may use any column arrangement as
//! long as the label names match.

use std::fs;
use std::path::Path;

use ndarray::{Array2, Array3};
use serde::{Deserialize, Serialize};

use crate::data::DataError;
use crate::decode::{DecodeError, PairLabelTable, NG_LABELS, TREE_EDGE_LABELS};
use crate::tree::{NodeGroup, Triplet};

/// Canonical role-column names for tree scores files.
pub const ROLE_LABELS: [&str; 2] = ["condition", "decision"];

/// A parsed scores file, one variant per decodable task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "lowercase")]
pub enum ScoresFile {
    Ng(NgScores),
    Tree(TreeScores),
    Te(TeScores),
}

/// Node-grouping scores: pairwise logical-relation probabilities over the
/// record's triplets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NgScores {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub triplets: Vec<Triplet>,
    #[serde(default = "default_ng_labels")]
    pub labels: Vec<String>,
    pub probs: Vec<Vec<Vec<f64>>>,
}

fn default_ng_labels() -> Vec<String> {
    NG_LABELS.iter().map(|s| s.to_string()).collect()
}

/// Tree-assembly scores: per-node role probabilities and pairwise edge
/// probabilities over node skeletons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeScores {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub nodes: Vec<NodeGroup>,
    #[serde(default = "default_role_labels")]
    pub role_labels: Vec<String>,
    pub role_probs: Vec<Vec<f64>>,
    #[serde(default = "default_edge_labels")]
    pub edge_labels: Vec<String>,
    pub edge_probs: Vec<Vec<Vec<f64>>>,
}

fn default_role_labels() -> Vec<String> {
    ROLE_LABELS.iter().map(|s| s.to_string()).collect()
}

fn default_edge_labels() -> Vec<String> {
    TREE_EDGE_LABELS.iter().map(|s| s.to_string()).collect()
}

/// Triplet-extraction scores: a token-pair label table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeScores {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub tokens: Vec<String>,
    pub entity_labels: Vec<String>,
    pub relation_labels: Vec<String>,
    pub probs: Vec<Vec<Vec<f64>>>,
}

/// Reads and parses a scores file.
pub fn load_scores(path: impl AsRef<Path>) -> Result<ScoresFile, DataError> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&content).map_err(|e| DataError::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

/// Writes a scores file as pretty-printed JSON.
pub fn save_scores(path: impl AsRef<Path>, scores: &ScoresFile) -> Result<(), DataError> {
    let path = path.as_ref();
    let mut body = serde_json::to_string_pretty(scores).expect("scores serialization cannot fail");
    body.push('\n');
    fs::write(path, body).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Column order `perm` such that `file_labels[perm[c]]` is canonical column
/// `c`; errors unless `file_labels` is exactly a permutation of `canonical`.
fn label_permutation(
    canonical: &[&str],
    file_labels: &[String],
) -> Result<Vec<usize>, DecodeError> {
    if file_labels.len() != canonical.len() {
        return Err(DecodeError::InvalidLabelSet(format!(
            "expected the {} labels {canonical:?}, got {file_labels:?}",
            canonical.len()
        )));
    }
    canonical
        .iter()
        .map(|want| {
            file_labels
                .iter()
                .position(|have| have == want)
                .ok_or_else(|| {
                    DecodeError::InvalidLabelSet(format!(
                        "label {want:?} missing from {file_labels:?}"
                    ))
                })
        })
        .collect()
}

/// Flattens nested `probs[i][j][c]` into a validated table, permuting label
/// columns into canonical order.
fn nested_to_table(
    probs: &[Vec<Vec<f64>>],
    n: usize,
    perm: &[usize],
) -> Result<PairLabelTable, DecodeError> {
    let k = perm.len();
    let mut arr = Array3::zeros((n, n, k));
    if probs.len() != n {
        return Err(DecodeError::DimensionMismatch(format!(
            "probability table has {} rows, expected {n}",
            probs.len()
        )));
    }
    for (i, row) in probs.iter().enumerate() {
        if row.len() != n {
            return Err(DecodeError::DimensionMismatch(format!(
                "row {i} has {} cells, expected {n}",
                row.len()
            )));
        }
        for (j, cell) in row.iter().enumerate() {
            if cell.len() != k {
                return Err(DecodeError::DimensionMismatch(format!(
                    "cell ({i}, {j}) has {} probabilities, expected {k}",
                    cell.len()
                )));
            }
            for (c, &src) in perm.iter().enumerate() {
                arr[(i, j, c)] = cell[src];
            }
        }
    }
    PairLabelTable::new(arr)
}

impl NgScores {
    /// The validated pair table in canonical `and`/`or`/`null` column order.
    pub fn to_table(&self) -> Result<PairLabelTable, DecodeError> {
        let perm = label_permutation(&NG_LABELS, &self.labels)?;
        nested_to_table(&self.probs, self.triplets.len(), &perm)
    }
}

impl TreeScores {
    /// The validated role matrix (condition, decision columns) and edge
    /// table (left-child, right-child, none columns).
    pub fn to_tables(&self) -> Result<(Array2<f64>, PairLabelTable), DecodeError> {
        let n = self.nodes.len();
        let role_perm = label_permutation(&ROLE_LABELS, &self.role_labels)?;
        if self.role_probs.len() != n {
            return Err(DecodeError::DimensionMismatch(format!(
                "role table has {} rows, expected {n}",
                self.role_probs.len()
            )));
        }
        let mut roles = Array2::zeros((n, 2));
        for (i, row) in self.role_probs.iter().enumerate() {
            if row.len() != 2 {
                return Err(DecodeError::DimensionMismatch(format!(
                    "role row {i} has {} entries, expected 2",
                    row.len()
                )));
            }
            for (c, &src) in role_perm.iter().enumerate() {
                roles[(i, c)] = row[src];
            }
        }
        let edge_perm = label_permutation(&TREE_EDGE_LABELS, &self.edge_labels)?;
        let edges = nested_to_table(&self.edge_probs, n, &edge_perm)?;
        Ok((roles, edges))
    }
}

impl TeScores {
    /// The validated token-pair table; columns are already in the canonical
    /// `[null, entities…, relations…]` order by construction.
    pub fn to_table(&self) -> Result<PairLabelTable, DecodeError> {
        let k = 1 + self.entity_labels.len() + self.relation_labels.len();
        let perm: Vec<usize> = (0..k).collect();
        nested_to_table(&self.probs, self.tokens.len(), &perm)
    }
}
