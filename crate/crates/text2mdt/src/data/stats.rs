//! Corpus statistics: tree-shape and relation histograms, node counts and
//! single-entity-overlap (SEO) detection.

use std::collections::BTreeMap;

use serde::Serialize;

use super::MdtRecord;
use crate::tree::{LogicalRel, Mdt, RelationType, Role, Triplet};

/// Node totals broken down by role and by logical relation. Both breakdowns
/// sum to `total`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct NodeCounts {
    pub total: usize,
    pub decision: usize,
    pub condition: usize,
    pub and: usize,
    pub or: usize,
    pub null: usize,
}

/// Aggregate statistics of a record collection.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CorpusStats {
    pub record_count: usize,
    /// Tree depth (levels) → number of records.
    pub depth_histogram: BTreeMap<usize, usize>,
    /// Relation label → triplet instance count.
    pub relation_histogram: BTreeMap<RelationType, usize>,
    pub node_counts: NodeCounts,
    pub avg_nodes_per_tree: f64,
    pub avg_triplets_per_tree: f64,
    /// Records containing at least one single-entity-overlap triplet pair.
    pub seo_record_count: usize,
}

/// Computes corpus statistics over validated records. A record whose tree
/// fails to reconstruct is counted under depth 0 so the depth histogram
/// still totals `record_count`.
pub fn compute_stats(records: &[MdtRecord]) -> CorpusStats {
    let mut stats = CorpusStats {
        record_count: records.len(),
        ..CorpusStats::default()
    };
    let mut triplet_total = 0usize;
    for record in records {
        let depth = Mdt::from_preorder(record.tree.clone())
            .map(|t| t.depth())
            .unwrap_or(0);
        *stats.depth_histogram.entry(depth).or_default() += 1;

        for node in &record.tree {
            stats.node_counts.total += 1;
            match node.role {
                Role::Decision => stats.node_counts.decision += 1,
                Role::Condition => stats.node_counts.condition += 1,
            }
            match node.logical_rel {
                LogicalRel::And => stats.node_counts.and += 1,
                LogicalRel::Or => stats.node_counts.or += 1,
                LogicalRel::Null => stats.node_counts.null += 1,
            }
            for t in &node.triplets {
                *stats.relation_histogram.entry(t.relation.clone()).or_default() += 1;
                triplet_total += 1;
            }
        }
        if has_seo(record) {
            stats.seo_record_count += 1;
        }
    }
    if !records.is_empty() {
        let n = records.len() as f64;
        stats.avg_nodes_per_tree = stats.node_counts.total as f64 / n;
        stats.avg_triplets_per_tree = triplet_total as f64 / n;
    }
    stats
}

/// True when any two distinct triplets of the record share exactly one
/// entity string. Entity comparison is exact (no normalization), matching
/// the strict triplet metric.
fn has_seo(record: &MdtRecord) -> bool {
    let triplets: Vec<&Triplet> = record.tree.iter().flat_map(|n| n.triplets.iter()).collect();
    for (i, a) in triplets.iter().enumerate() {
        for b in &triplets[i + 1..] {
            if a == b {
                continue;
            }
            if shared_entities(a, b) == 1 {
                return true;
            }
        }
    }
    false
}

fn shared_entities(a: &Triplet, b: &Triplet) -> usize {
    let sa: std::collections::BTreeSet<&str> = [a.subject.as_str(), a.object.as_str()].into();
    let sb: std::collections::BTreeSet<&str> = [b.subject.as_str(), b.object.as_str()].into();
    sa.intersection(&sb).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::MdtNode;

    fn trip(s: &str, o: &str) -> Triplet {
        Triplet::new(s, RelationType::ClinicalFeature, o)
    }

    fn record(id: &str, tree: Vec<MdtNode>) -> MdtRecord {
        MdtRecord {
            id: id.into(),
            text: "text".into(),
            tree,
        }
    }

    fn simple_tree(s1: &str, o1: &str, s2: &str, o2: &str) -> Vec<MdtNode> {
        vec![
            MdtNode::new(Role::Condition, vec![trip(s1, o1)], LogicalRel::Null),
            MdtNode::new(Role::Decision, vec![trip(s2, o2)], LogicalRel::Null),
            MdtNode::new(Role::Decision, vec![], LogicalRel::Null),
        ]
    }

    #[test]
    fn histograms_total_consistently() {
        let records = vec![
            record("a", simple_tree("p", "q", "r", "s")),
            record(
                "b",
                vec![MdtNode::new(
                    Role::Decision,
                    vec![trip("x", "y"), trip("z", "w")],
                    LogicalRel::Or,
                )],
            ),
        ];
        let stats = compute_stats(&records);
        assert_eq!(stats.record_count, 2);
        assert_eq!(stats.depth_histogram.values().sum::<usize>(), 2);
        assert_eq!(stats.depth_histogram[&2], 1);
        assert_eq!(stats.depth_histogram[&1], 1);
        assert_eq!(stats.node_counts.total, 4);
        assert_eq!(stats.node_counts.decision + stats.node_counts.condition, 4);
        assert_eq!(
            stats.node_counts.and + stats.node_counts.or + stats.node_counts.null,
            4
        );
        assert_eq!(stats.relation_histogram.values().sum::<usize>(), 4);
        assert_eq!(stats.avg_nodes_per_tree, 2.0);
        assert_eq!(stats.avg_triplets_per_tree, 2.0);
    }

    #[test]
    fn seo_detection() {
        // "fever" appears in two distinct triplets → SEO.
        let seo = record("s", simple_tree("fever", "x", "fever", "y"));
        // Disjoint entities → no SEO.
        let plain = record("p", simple_tree("a", "b", "c", "d"));
        // Identical duplicate triplets share two entities, not one → no SEO.
        let dup = record(
            "d",
            vec![MdtNode::new(
                Role::Decision,
                vec![trip("a", "b"), trip("a", "b")],
                LogicalRel::And,
            )],
        );
        // Two triplets sharing both entities → not a *single* overlap.
        let both = record(
            "b2",
            vec![MdtNode::new(
                Role::Decision,
                vec![trip("a", "b"), Triplet::new("a", RelationType::MedicalOption, "b")],
                LogicalRel::And,
            )],
        );
        let stats = compute_stats(&[seo, plain, dup, both]);
        assert_eq!(stats.seo_record_count, 1);
    }

    #[test]
    fn empty_corpus() {
        let stats = compute_stats(&[]);
        assert_eq!(stats.record_count, 0);
        assert_eq!(stats.avg_nodes_per_tree, 0.0);
    }
}
