//! Whole-tree and triplet-level comparisons: strict P/R/F1, exact tree
//! accuracy, decision-path F1 and the tree Levenshtein ratio.

use std::collections::BTreeMap;

use super::edit::edit_distance;
use super::report::{EvalConfig, Prf};
use super::tuple::tree_tuple;
use crate::tree::{Branch, LogicalRel, Mdt, Role, Triplet};

/// Strict instance-level precision/recall/F1 over triplet multisets.
/// Matching is exact on all three components and multiset-aware: each gold
/// instance can absorb at most one predicted instance. Two empty multisets
/// score 1.0 across the board by convention.
pub fn triplet_prf(pred: &[Triplet], gold: &[Triplet]) -> Prf {
    if pred.is_empty() && gold.is_empty() {
        return Prf::perfect();
    }
    let mut gold_counts: BTreeMap<&Triplet, usize> = BTreeMap::new();
    for t in gold {
        *gold_counts.entry(t).or_default() += 1;
    }
    let mut matched = 0usize;
    for t in pred {
        if let Some(c) = gold_counts.get_mut(t) {
            if *c > 0 {
                *c -= 1;
                matched += 1;
            }
        }
    }
    let precision = ratio(matched, pred.len());
    let recall = ratio(matched, gold.len());
    Prf::from_pr(precision, recall)
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Exact-match accuracy: 1 iff the trees have identical structure, roles and
/// logical relations, and every corresponding node holds the same triplet
/// *set* (order-insensitive, duplicates collapsed).
pub fn tree_acc(pred: &Mdt, gold: &Mdt) -> f64 {
    if trees_equal(pred, gold) {
        1.0
    } else {
        0.0
    }
}

fn trees_equal(pred: &Mdt, gold: &Mdt) -> bool {
    if pred.len() != gold.len() {
        return false;
    }
    pred.nodes().iter().zip(gold.nodes()).all(|(p, g)| {
        p.role == g.role && p.logical_rel == g.logical_rel && p.triplet_set() == g.triplet_set()
    })
    // Equal role sequences imply equal tree shapes: the preorder
    // reconstruction is a function of the role sequence alone.
}

/// Canonical content of one node for path matching: role, logical relation
/// and the deduplicated, sorted triplet list.
type NodeKey<'a> = (Role, LogicalRel, Vec<&'a Triplet>);

fn node_key(tree: &Mdt, index: usize) -> NodeKey<'_> {
    let node = tree.node(index);
    (
        node.role,
        node.logical_rel,
        node.triplet_set().into_iter().collect(),
    )
}

/// Decision-path F1. A predicted root-to-leaf path matches a gold path iff
/// node contents and branch directions agree step by step. Paths within one
/// tree are pairwise distinct (two leaves always diverge at their lowest
/// common ancestor's branch), so set matching needs no multiset bookkeeping.
pub fn dp_f1(pred: &Mdt, gold: &Mdt) -> Prf {
    let pred_paths = path_keys(pred);
    let gold_paths = path_keys(gold);
    let matched = pred_paths.iter().filter(|p| gold_paths.contains(p)).count();
    let precision = ratio(matched, pred_paths.len());
    let recall = ratio(matched, gold_paths.len());
    Prf::from_pr(precision, recall)
}

fn path_keys(tree: &Mdt) -> Vec<Vec<(NodeKey<'_>, Branch)>> {
    tree.decision_paths()
        .iter()
        .map(|path| {
            path.steps()
                .iter()
                .map(|&(idx, branch)| (node_key(tree, idx), branch))
                .collect()
        })
        .collect()
}

/// Levenshtein ratio between whole trees: both are flattened depth-first
/// into one atom tuple (role atoms always included — trees carry roles),
/// compared by plain edit distance without any permutation search, and
/// converted under the configured ratio convention.
pub fn tree_lr(pred: &Mdt, gold: &Mdt, cfg: &EvalConfig) -> f64 {
    let p = tree_tuple(pred);
    let g = tree_tuple(gold);
    let ed = edit_distance(&p, &g);
    cfg.lr_convention.apply(ed, p.len(), g.len())
}
