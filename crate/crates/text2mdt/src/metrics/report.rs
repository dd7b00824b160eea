//! Evaluation configuration, per-record scores and report aggregation.

use std::collections::BTreeMap;

use serde::Serialize;

use super::compare::{dp_f1, tree_acc, tree_lr, triplet_prf};
use super::ng::ng_lr_groups;
use super::MetricError;
use crate::data::MdtRecord;
use crate::tree::{Mdt, NodeGroup, Triplet};
use crate::validate::{validate_tree, Mode};

/// How an edit distance is turned into a Levenshtein ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LrConvention {
    /// `1 - ed / (len(pred) + len(gold))` — a similarity in [0, 1], 1 for a
    /// perfect match. The default, matching the direction of reported
    /// scores (higher is better).
    #[default]
    Similarity,
    /// `ed / max(len(pred), len(gold))` — the distance ratio exactly as the
    /// defining equation reads; 0 for a perfect match and may exceed 1,
    /// since an insert/delete-only distance can reach the *sum* of lengths.
    PaperRaw,
}

impl LrConvention {
    /// Applies the convention to an edit distance between tuples of the
    /// given lengths. Two empty tuples score 1 (similarity) / 0 (raw) by
    /// convention.
    pub fn apply(self, ed: usize, len_a: usize, len_b: usize) -> f64 {
        let total = len_a + len_b;
        if total == 0 {
            return match self {
                LrConvention::Similarity => 1.0,
                LrConvention::PaperRaw => 0.0,
            };
        }
        match self {
            LrConvention::Similarity => 1.0 - ed as f64 / total as f64,
            LrConvention::PaperRaw => ed as f64 / len_a.max(len_b) as f64,
        }
    }
}

/// Knobs shared by the node-grouping and tree metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalConfig {
    /// Include the role atom in node-grouping tuples. Off by default: the
    /// pure node-grouping subtask carries no roles. Tree-derived breakdowns
    /// turn it on.
    pub ng_include_role: bool,
    pub lr_convention: LrConvention,
    /// Gold-node count up to which the permutation search enumerates
    /// exhaustively; above it (and up to the hard cap of 12) the search
    /// switches to branch-and-bound.
    pub permutation_limit: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            ng_include_role: false,
            lr_convention: LrConvention::default(),
            permutation_limit: 9,
        }
    }
}

/// Precision/recall/F1 triple. `f1` is 0 when precision + recall is 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    pub fn from_pr(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Prf {
            precision,
            recall,
            f1,
        }
    }

    pub fn perfect() -> Self {
        Prf {
            precision: 1.0,
            recall: 1.0,
            f1: 1.0,
        }
    }

    pub fn zero() -> Self {
        Prf {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
        }
    }
}

/// Scores of one record. `triplet` and `ng_lr` are present only in
/// breakdown mode; `valid` is false when either tree of the pair failed
/// validation, in which case the tree metrics are recorded as 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordScores {
    pub id: String,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triplet: Option<Prf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ng_lr: Option<f64>,
    pub tree_acc: f64,
    pub dp_f1: Prf,
    pub tree_lr: f64,
}

/// Aggregated evaluation: macro averages over records plus the per-record
/// detail. All aggregates are plain means of the per-record values (F1
/// included — the mean of per-record F1, not the F1 of mean P/R).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triplet: Option<Prf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ng_lr: Option<f64>,
    pub tree_acc: f64,
    pub dp_f1: Prf,
    pub tree_lr: f64,
    pub invalid_records: usize,
    pub records: Vec<RecordScores>,
}

/// Scores prediction records against gold records. Ids must match 1:1; the
/// report lists records in gold-file order. With `breakdown` on, triplet
/// P/R/F1 and the node-grouping ratio are additionally derived from the
/// trees' node contents.
pub fn evaluate(
    pred: &[MdtRecord],
    gold: &[MdtRecord],
    cfg: &EvalConfig,
    breakdown: bool,
) -> Result<EvalReport, MetricError> {
    if gold.is_empty() && pred.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let pred_by_id = index_by_id(pred)?;
    let gold_ids = index_by_id(gold)?; // detects duplicate gold ids
    for id in pred_by_id.keys() {
        if !gold_ids.contains_key(id) {
            return Err(MetricError::IdMismatch(format!(
                "prediction id {id:?} has no gold record"
            )));
        }
    }

    let mut records = Vec::with_capacity(gold.len());
    for g in gold {
        let p = *pred_by_id
            .get(g.id.as_str())
            .ok_or_else(|| MetricError::IdMismatch(format!("gold id {:?} has no prediction", g.id)))?;
        records.push(score_record(p, g, cfg, breakdown)?);
    }

    let n = records.len() as f64;
    let invalid_records = records.iter().filter(|r| !r.valid).count();
    let mean = |f: &dyn Fn(&RecordScores) -> f64| records.iter().map(f).sum::<f64>() / n;
    let report = EvalReport {
        triplet: breakdown.then(|| Prf {
            precision: mean(&|r| r.triplet.unwrap().precision),
            recall: mean(&|r| r.triplet.unwrap().recall),
            f1: mean(&|r| r.triplet.unwrap().f1),
        }),
        ng_lr: breakdown.then(|| mean(&|r| r.ng_lr.unwrap())),
        tree_acc: mean(&|r| r.tree_acc),
        dp_f1: Prf {
            precision: mean(&|r| r.dp_f1.precision),
            recall: mean(&|r| r.dp_f1.recall),
            f1: mean(&|r| r.dp_f1.f1),
        },
        tree_lr: mean(&|r| r.tree_lr),
        invalid_records,
        records,
    };
    Ok(report)
}

fn index_by_id(records: &[MdtRecord]) -> Result<BTreeMap<&str, &MdtRecord>, MetricError> {
    let mut map = BTreeMap::new();
    for r in records {
        if map.insert(r.id.as_str(), r).is_some() {
            return Err(MetricError::IdMismatch(format!("duplicate record id {:?}", r.id)));
        }
    }
    Ok(map)
}

fn score_record(
    pred: &MdtRecord,
    gold: &MdtRecord,
    cfg: &EvalConfig,
    breakdown: bool,
) -> Result<RecordScores, MetricError> {
    let pred_tree = checked_tree(&pred.tree);
    let gold_tree = checked_tree(&gold.tree);
    let valid = pred_tree.is_some() && gold_tree.is_some();

    // Triplet and node-grouping scores need only the node contents, so they
    // are computable even when a tree's structure is broken.
    let (triplet, ng) = if breakdown {
        let pred_triplets: Vec<Triplet> =
            pred.tree.iter().flat_map(|n| n.triplets.clone()).collect();
        let gold_triplets: Vec<Triplet> =
            gold.tree.iter().flat_map(|n| n.triplets.clone()).collect();
        let pred_groups: Vec<NodeGroup> = pred.tree.iter().map(NodeGroup::from_node).collect();
        let gold_groups: Vec<NodeGroup> = gold.tree.iter().map(NodeGroup::from_node).collect();
        (
            Some(triplet_prf(&pred_triplets, &gold_triplets)),
            Some(ng_lr_groups(&pred_groups, &gold_groups, cfg)?),
        )
    } else {
        (None, None)
    };

    let (tree_acc, dp, lr) = match (&pred_tree, &gold_tree) {
        (Some(p), Some(g)) => (tree_acc(p, g), dp_f1(p, g), tree_lr(p, g, cfg)),
        _ => (0.0, Prf::zero(), 0.0),
    };

    Ok(RecordScores {
        id: gold.id.clone(),
        valid,
        triplet,
        ng_lr: ng,
        tree_acc,
        dp_f1: dp,
        tree_lr: lr,
    })
}

/// Parses and validates a record's node sequence; `None` when it fails any
/// structural or node-local invariant. Lenient vocabulary handling: unknown
/// relation labels are comparable strings, not grounds to zero the record.
fn checked_tree(nodes: &[crate::tree::MdtNode]) -> Option<Mdt> {
    match validate_tree(nodes, Mode::Lenient) {
        Ok(report) if report.is_valid() => Mdt::from_preorder(nodes.to_vec()).ok(),
        _ => None,
    }
}
