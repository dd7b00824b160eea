//! Node-grouping decode: turning pairwise logical-relation probabilities
//! over triplets into node skeletons.

use super::{DecodeError, PairLabelTable};
use crate::tree::{LogicalRel, NodeGroup, Triplet};

/// Column order of node-grouping tables: `and`, `or`, `null`.
pub const NG_LABELS: [&str; 3] = ["and", "or", "null"];

/// Decodes a pairwise logical-relation table into node skeletons (triplet
/// groups plus their logical relation; no roles).
///
/// Each unordered triplet pair gets one label distribution — the mean of its
/// two directed cells — and its argmax label with probability mass `m`.
/// Pairs are processed by descending `m` (ties: smaller indices first).
/// `null` pairs create no link; an `and`/`or` pair links its triplets unless
/// the link conflicts with the already-established label of either side's
/// connected component (label consistency is enforced transitively — a
/// component is entirely `and`-linked or entirely `or`-linked). Connected
/// components become nodes: members in input order, logical relation `null`
/// for singletons and the component label otherwise, nodes ordered by their
/// smallest member index.
pub fn decode_node_grouping(
    pair_probs: &PairLabelTable,
    triplets: &[Triplet],
) -> Result<Vec<NodeGroup>, DecodeError> {
    let n = triplets.len();
    if pair_probs.n() != n {
        return Err(DecodeError::DimensionMismatch(format!(
            "table is {} × {} but there are {n} triplets",
            pair_probs.n(),
            pair_probs.n()
        )));
    }
    if pair_probs.k() != NG_LABELS.len() {
        return Err(DecodeError::DimensionMismatch(format!(
            "node-grouping tables need {} labels {NG_LABELS:?}, got {}",
            NG_LABELS.len(),
            pair_probs.k()
        )));
    }

    // Argmax over the symmetrized distribution of each unordered pair.
    let mut pairs: Vec<(f64, usize, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut best = (0usize, f64::NEG_INFINITY);
            for label in 0..NG_LABELS.len() {
                let p = (pair_probs.cell(i, j)[label] + pair_probs.cell(j, i)[label]) / 2.0;
                if p > best.1 {
                    best = (label, p);
                }
            }
            pairs.push((best.1, i, j, best.0));
        }
    }
    pairs.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .expect("probabilities are finite")
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut groups = Grouping::new(n);
    for &(_, i, j, label) in &pairs {
        let link = match label {
            0 => LogicalRel::And,
            1 => LogicalRel::Or,
            _ => continue, // null: no link
        };
        groups.try_link(i, j, link);
    }
    Ok(groups.into_nodes(triplets))
}

/// Union-find over triplet indices with one logical-relation label per
/// component.
struct Grouping {
    parent: Vec<usize>,
    label: Vec<Option<LogicalRel>>,
}

impl Grouping {
    fn new(n: usize) -> Self {
        Grouping {
            parent: (0..n).collect(),
            label: vec![None; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    /// Links `i` and `j` with `link` unless that conflicts with either
    /// component's established label. Returns whether the link was accepted.
    fn try_link(&mut self, i: usize, j: usize, link: LogicalRel) -> bool {
        let (ri, rj) = (self.find(i), self.find(j));
        let compatible =
            |l: Option<LogicalRel>| l.is_none() || l == Some(link);
        if !compatible(self.label[ri]) || !compatible(self.label[rj]) {
            return false;
        }
        if ri == rj {
            return true; // already linked with the same label
        }
        // Union by smaller root index keeps the representative stable.
        let (keep, merge) = if ri < rj { (ri, rj) } else { (rj, ri) };
        self.parent[merge] = keep;
        self.label[keep] = Some(link);
        true
    }

    fn into_nodes(mut self, triplets: &[Triplet]) -> Vec<NodeGroup> {
        let n = triplets.len();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let root = self.find(i);
            members[root].push(i);
        }
        let mut nodes = Vec::new();
        for root in 0..n {
            if members[root].is_empty() {
                continue;
            }
            let logical_rel = if members[root].len() == 1 {
                LogicalRel::Null
            } else {
                self.label[root].expect("multi-member components always carry a label")
            };
            let group_triplets = members[root]
                .iter()
                .map(|&i| triplets[i].clone())
                .collect();
            nodes.push(NodeGroup::new(group_triplets, logical_rel));
        }
        nodes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array3;
    use crate::tree::RelationType;

    fn trip(s: &str) -> Triplet {
        Triplet::new(s, RelationType::ClinicalFeature, "o")
    }

    /// Table that is null everywhere except the listed symmetric pair
    /// labels, each with the given mass (remainder on null).
    fn ng_table(n: usize, links: &[(usize, usize, usize, f64)]) -> PairLabelTable {
        let mut probs = Array3::zeros((n, n, 3));
        for i in 0..n {
            for j in 0..n {
                probs[(i, j, 2)] = 1.0;
            }
        }
        for &(i, j, label, p) in links {
            for (a, b) in [(i, j), (j, i)] {
                probs[(a, b, 2)] = 1.0 - p;
                probs[(a, b, label)] = p;
            }
        }
        PairLabelTable::new(probs).unwrap()
    }

    #[test]
    fn all_null_yields_singletons() {
        let triplets = vec![trip("a"), trip("b"), trip("c")];
        let table = ng_table(3, &[]);
        let nodes = decode_node_grouping(&table, &triplets).unwrap();
        assert_eq!(nodes.len(), 3);
        assert!(nodes.iter().all(|g| g.logical_rel == LogicalRel::Null));
        assert!(nodes.iter().all(|g| g.triplets.len() == 1));
    }

    #[test]
    fn single_and_pair_plus_singleton() {
        let triplets = vec![trip("a"), trip("b"), trip("c")];
        let table = ng_table(3, &[(0, 1, 0, 0.9)]);
        let nodes = decode_node_grouping(&table, &triplets).unwrap();
        assert_eq!(nodes.len(), 2);
        assert_eq!(nodes[0].triplets, vec![trip("a"), trip("b")]);
        assert_eq!(nodes[0].logical_rel, LogicalRel::And);
        assert_eq!(nodes[1].logical_rel, LogicalRel::Null);
    }

    #[test]
    fn conflicting_lower_mass_link_is_rejected() {
        // AND(0,1)@0.9 is established first; OR(1,2)@0.8 would mix labels
        // within one component and is rejected, leaving {2} a singleton.
        let triplets = vec![trip("a"), trip("b"), trip("c")];
        let table = ng_table(3, &[(0, 1, 0, 0.9), (1, 2, 1, 0.8)]);
        let nodes = decode_node_grouping(&table, &triplets).unwrap();
        assert_eq!(nodes.len(), 2);
        assert_eq!(nodes[0].logical_rel, LogicalRel::And);
        assert_eq!(nodes[0].triplets.len(), 2);
        assert_eq!(nodes[1].triplets, vec![trip("c")]);
    }

    #[test]
    fn transitive_conflict_across_components() {
        // AND(0,1)@0.9 and AND(2,3)@0.85 form two components; OR(1,2)@0.8
        // would merge them under a different label — rejected transitively.
        let triplets = vec![trip("a"), trip("b"), trip("c"), trip("d")];
        let table = ng_table(
            4,
            &[(0, 1, 0, 0.9), (2, 3, 0, 0.85), (1, 2, 1, 0.8)],
        );
        let nodes = decode_node_grouping(&table, &triplets).unwrap();
        assert_eq!(nodes.len(), 2);
        assert!(nodes.iter().all(|g| g.logical_rel == LogicalRel::And));
    }

    #[test]
    fn chained_links_of_one_label_merge() {
        let triplets = vec![trip("a"), trip("b"), trip("c")];
        let table = ng_table(3, &[(0, 1, 1, 0.9), (1, 2, 1, 0.8)]);
        let nodes = decode_node_grouping(&table, &triplets).unwrap();
        assert_eq!(nodes.len(), 1);
        assert_eq!(nodes[0].logical_rel, LogicalRel::Or);
        assert_eq!(nodes[0].triplets.len(), 3);
    }

    #[test]
    fn partition_covers_every_triplet_exactly_once() {
        let triplets: Vec<Triplet> = (0..6).map(|i| trip(&format!("t{i}"))).collect();
        let table = ng_table(6, &[(0, 3, 0, 0.7), (1, 4, 1, 0.6), (3, 5, 0, 0.5)]);
        let nodes = decode_node_grouping(&table, &triplets).unwrap();
        let mut seen: Vec<&Triplet> = nodes.iter().flat_map(|g| g.triplets.iter()).collect();
        seen.sort();
        let mut expected: Vec<&Triplet> = triplets.iter().collect();
        expected.sort();
        assert_eq!(seen, expected);
    }

    #[test]
    fn size_checks() {
        let table = ng_table(3, &[]);
        assert!(decode_node_grouping(&table, &[trip("a")]).is_err());
    }
}
