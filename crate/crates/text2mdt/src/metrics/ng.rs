//! Node-grouping edit distance, minimized over gold node permutations.
//!
//! The metric compares the predicted grouping — flattened into one atom
//! tuple — against every permutation of the gold nodes and keeps the lowest
//! edit distance. Predicted node tuples are first put into canonical
//! (lexicographic) order, so the score depends only on the predicted *set*
//! of nodes, never on an arbitrary emission order; gold order is absorbed by
//! the minimization itself.

use super::edit::{Atom, Interner};
use super::report::EvalConfig;
use super::tuple::{group_tuple, node_tuple};
use super::MetricError;
use crate::tree::{Mdt, NodeGroup};

/// Permutation search refuses gold trees larger than this outright.
pub const HARD_NODE_LIMIT: usize = 12;

/// Minimum edit distance between the predicted grouping and any permutation
/// of the gold tree's nodes. Role atom inclusion and the permutation-search
/// strategy come from `cfg`.
pub fn ng_ed(pred: &[NodeGroup], gold: &Mdt, cfg: &EvalConfig) -> Result<usize, MetricError> {
    let blocks = gold
        .nodes()
        .iter()
        .map(|n| node_tuple(n, cfg.ng_include_role))
        .collect::<Vec<_>>();
    let pred_atoms = pred_tuple(pred, cfg.ng_include_role)?;
    min_perm_ed(&pred_atoms, &blocks, cfg.permutation_limit)
}

/// As [`ng_ed`], but with the gold side given as node groups rather than a
/// tree (used when gold structure is unavailable or irrelevant).
pub fn ng_ed_groups(
    pred: &[NodeGroup],
    gold: &[NodeGroup],
    cfg: &EvalConfig,
) -> Result<usize, MetricError> {
    let blocks = gold
        .iter()
        .map(|g| group_tuple(g, cfg.ng_include_role))
        .collect::<Result<Vec<_>, _>>()?;
    let pred_atoms = pred_tuple(pred, cfg.ng_include_role)?;
    min_perm_ed(&pred_atoms, &blocks, cfg.permutation_limit)
}

/// Levenshtein ratio of the node grouping, derived from [`ng_ed`] under the
/// configured convention. The gold tuple length is permutation-invariant, so
/// only the distance itself needs the search.
pub fn ng_lr(pred: &[NodeGroup], gold: &Mdt, cfg: &EvalConfig) -> Result<f64, MetricError> {
    let ed = ng_ed(pred, gold, cfg)?;
    let pred_len = pred_tuple(pred, cfg.ng_include_role)?.len();
    let gold_len: usize = gold
        .nodes()
        .iter()
        .map(|n| node_tuple(n, cfg.ng_include_role).len())
        .sum();
    Ok(cfg.lr_convention.apply(ed, pred_len, gold_len))
}

/// As [`ng_lr`] over gold node groups.
pub fn ng_lr_groups(
    pred: &[NodeGroup],
    gold: &[NodeGroup],
    cfg: &EvalConfig,
) -> Result<f64, MetricError> {
    let ed = ng_ed_groups(pred, gold, cfg)?;
    let pred_len = pred_tuple(pred, cfg.ng_include_role)?.len();
    let gold_len: usize = gold
        .iter()
        .map(|g| group_tuple(g, cfg.ng_include_role).map(|t| t.len()))
        .sum::<Result<usize, _>>()?;
    Ok(cfg.lr_convention.apply(ed, pred_len, gold_len))
}

/// Canonical predicted tuple: per-group tuples sorted lexicographically,
/// then concatenated.
fn pred_tuple(pred: &[NodeGroup], include_role: bool) -> Result<Vec<Atom>, MetricError> {
    let mut tuples = pred
        .iter()
        .map(|g| group_tuple(g, include_role))
        .collect::<Result<Vec<_>, _>>()?;
    tuples.sort();
    Ok(tuples.concat())
}

/// Exact minimum of `edit_distance(pred, concat(blocks under m))` over all
/// permutations `m`. Depth-first search over which gold block to append
/// next, carrying the active edit-distance DP row; above `limit` gold nodes
/// the search prunes with an admissible lower bound (branch-and-bound, still
/// exact), and more than [`HARD_NODE_LIMIT`] nodes is an error.
fn min_perm_ed(pred: &[Atom], blocks: &[Vec<Atom>], limit: usize) -> Result<usize, MetricError> {
    let k = blocks.len();
    if k > HARD_NODE_LIMIT {
        return Err(MetricError::PermutationLimitExceeded { count: k });
    }
    let mut interner = Interner::default();
    let pred_ids = interner.intern_seq(pred);
    let block_ids: Vec<Vec<u32>> = blocks.iter().map(|b| interner.intern_seq(b)).collect();
    let total: usize = block_ids.iter().map(|b| b.len()).sum();
    let prune = k > limit.max(1);

    // Upper bound to start from: the identity permutation.
    let mut row: Vec<usize> = (0..=pred_ids.len()).collect();
    let identity = {
        let mut r = row.clone();
        for b in &block_ids {
            advance_row(&mut r, b, &pred_ids);
        }
        r[pred_ids.len()]
    };
    let mut best = identity;
    let mut used = vec![false; k];
    dfs(
        &block_ids, &pred_ids, &mut used, &mut row, total, &mut best, prune,
    );
    Ok(best)
}

fn dfs(
    blocks: &[Vec<u32>],
    pred: &[u32],
    used: &mut [bool],
    row: &mut Vec<usize>,
    remaining: usize,
    best: &mut usize,
    prune: bool,
) {
    // A perfect match cannot be improved on; this also makes the
    // pred-equals-gold case near-instant regardless of node count.
    if *best == 0 {
        return;
    }
    if remaining == 0 {
        *best = (*best).min(row[pred.len()]);
        return;
    }
    if prune {
        let n = pred.len();
        let lb = row
            .iter()
            .enumerate()
            .map(|(j, &c)| c + remaining.abs_diff(n - j))
            .min()
            .expect("row is nonempty");
        if lb >= *best {
            return;
        }
    }
    for i in 0..blocks.len() {
        if used[i] {
            continue;
        }
        let mut next = row.clone();
        advance_row(&mut next, &blocks[i], pred);
        used[i] = true;
        dfs(blocks, pred, used, &mut next, remaining - blocks[i].len(), best, prune);
        used[i] = false;
    }
}

/// Extends the DP row `row[j] = ed(gold_so_far, pred[..j])` by one gold
/// block.
fn advance_row(row: &mut [usize], block: &[u32], pred: &[u32]) {
    for &s in block {
        let mut prev_diag = row[0];
        row[0] += 1;
        for j in 1..row.len() {
            let keep = if pred[j - 1] == s { prev_diag } else { usize::MAX };
            prev_diag = row[j];
            row[j] = keep.min(row[j - 1] + 1).min(row[j] + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::report::LrConvention;
    use crate::tree::{LogicalRel, MdtNode, RelationType, Role, Triplet};

    fn trip(s: &str) -> Triplet {
        Triplet::new(s, RelationType::ClinicalFeature, "o")
    }

    fn group(triplets: Vec<Triplet>, lr: LogicalRel) -> NodeGroup {
        NodeGroup::new(triplets, lr)
    }

    fn gold_tree() -> Mdt {
        Mdt::from_preorder(vec![
            MdtNode::new(Role::Condition, vec![trip("a")], LogicalRel::Null),
            MdtNode::new(Role::Decision, vec![trip("b")], LogicalRel::Null),
            MdtNode::new(Role::Decision, vec![trip("c")], LogicalRel::Null),
        ])
        .unwrap()
    }

    #[test]
    fn identical_grouping_in_any_order_scores_zero() {
        let cfg = EvalConfig::default();
        let gold = gold_tree();
        let pred = vec![
            group(vec![trip("c")], LogicalRel::Null),
            group(vec![trip("a")], LogicalRel::Null),
            group(vec![trip("b")], LogicalRel::Null),
        ];
        assert_eq!(ng_ed(&pred, &gold, &cfg).unwrap(), 0);
        assert_eq!(ng_lr(&pred, &gold, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn merged_nodes_example() {
        // Pred merges two 1-triplet NULL gold nodes into one 2-triplet AND
        // node. Pred tuple [t1, t2, and]; best gold order [t1, null, t2,
        // null]: delete "and", insert two "null"s — three operations.
        let cfg = EvalConfig::default();
        let gold = vec![
            group(vec![trip("t1")], LogicalRel::Null),
            group(vec![trip("t2")], LogicalRel::Null),
        ];
        let pred = vec![group(vec![trip("t1"), trip("t2")], LogicalRel::And)];
        assert_eq!(ng_ed_groups(&pred, &gold, &cfg).unwrap(), 3);
        let sim = ng_lr_groups(&pred, &gold, &cfg).unwrap();
        assert!((sim - 4.0 / 7.0).abs() < 1e-12, "similarity was {sim}");
        let raw_cfg = EvalConfig {
            lr_convention: LrConvention::PaperRaw,
            ..EvalConfig::default()
        };
        let raw = ng_lr_groups(&pred, &gold, &raw_cfg).unwrap();
        assert!((raw - 0.75).abs() < 1e-12, "raw ratio was {raw}");
    }

    #[test]
    fn disjoint_atoms_of_equal_length_score_zero_similarity() {
        // Gold tuple (roles off) is [a, null, b, null, c, null]; a pred of
        // two AND groups over fresh triplets shares no atom with it, so the
        // LCS is empty, ED equals the summed lengths and similarity is 0.
        let cfg = EvalConfig::default();
        let gold = gold_tree();
        let pred = vec![
            group(vec![trip("x"), trip("y")], LogicalRel::And),
            group(vec![trip("z"), trip("w")], LogicalRel::And),
        ];
        assert_eq!(ng_ed(&pred, &gold, &cfg).unwrap(), 12);
        assert_eq!(ng_lr(&pred, &gold, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn missing_role_only_matters_when_requested() {
        let gold = gold_tree();
        let pred = vec![group(vec![trip("a")], LogicalRel::Null)];
        let cfg = EvalConfig {
            ng_include_role: true,
            ..EvalConfig::default()
        };
        assert_eq!(ng_ed(&pred, &gold, &cfg), Err(MetricError::MissingRole));
        assert!(ng_ed(&pred, &gold, &EvalConfig::default()).is_ok());
    }

    #[test]
    fn hard_limit_is_an_error() {
        let cfg = EvalConfig::default();
        let gold: Vec<NodeGroup> = (0..13)
            .map(|i| group(vec![trip(&format!("t{i}"))], LogicalRel::Null))
            .collect();
        let pred = vec![group(vec![trip("t0")], LogicalRel::Null)];
        assert_eq!(
            ng_ed_groups(&pred, &gold, &cfg),
            Err(MetricError::PermutationLimitExceeded { count: 13 })
        );
    }

    #[test]
    fn branch_and_bound_matches_exhaustive() {
        // Same inputs evaluated with the exhaustive regime (limit ≥ k) and
        // the branch-and-bound regime (limit < k) must agree.
        let gold: Vec<NodeGroup> = (0..5)
            .map(|i| {
                group(
                    vec![trip(&format!("g{i}")), trip(&format!("g{}", (i + 1) % 5))],
                    LogicalRel::Or,
                )
            })
            .collect();
        let pred: Vec<NodeGroup> = (0..4)
            .map(|i| group(vec![trip(&format!("g{i}"))], LogicalRel::Null))
            .collect();
        let exhaustive = EvalConfig {
            permutation_limit: 9,
            ..EvalConfig::default()
        };
        let bnb = EvalConfig {
            permutation_limit: 1,
            ..EvalConfig::default()
        };
        assert_eq!(
            ng_ed_groups(&pred, &gold, &exhaustive).unwrap(),
            ng_ed_groups(&pred, &gold, &bnb).unwrap()
        );
    }

    #[test]
    fn empty_pred_costs_whole_gold_tuple() {
        let cfg = EvalConfig::default();
        let gold = gold_tree();
        // Gold tuple without roles: 3 nodes × (1 triplet + 1 lrel) = 6.
        assert_eq!(ng_ed(&[], &gold, &cfg).unwrap(), 6);
        assert_eq!(ng_lr(&[], &gold, &cfg).unwrap(), 0.0);
    }
}
