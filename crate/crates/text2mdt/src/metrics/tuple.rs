//! Flattening nodes and trees into atom tuples.

use super::edit::Atom;
use super::MetricError;
use crate::tree::{Mdt, MdtNode, NodeGroup};

/// Atoms of one tree node: optional role label, the node's triplets in
/// canonical order (lexicographic; duplicates kept), then the logical
/// relation label.
pub fn node_tuple(node: &MdtNode, include_role: bool) -> Vec<Atom> {
    let mut atoms = Vec::with_capacity(node.triplets.len() + 2);
    if include_role {
        atoms.push(Atom::role(node.role));
    }
    for t in node.sorted_triplets() {
        atoms.push(Atom::triplet(t));
    }
    atoms.push(Atom::logical_rel(node.logical_rel));
    atoms
}

/// Atoms of one node group. Fails with [`MetricError::MissingRole`] when role
/// atoms are requested but the group does not carry a role (pure
/// node-grouping output has none).
pub fn group_tuple(group: &NodeGroup, include_role: bool) -> Result<Vec<Atom>, MetricError> {
    let mut atoms = Vec::with_capacity(group.triplets.len() + 2);
    if include_role {
        let role = group.role.ok_or(MetricError::MissingRole)?;
        atoms.push(Atom::role(role));
    }
    let mut sorted: Vec<_> = group.triplets.iter().collect();
    sorted.sort();
    for t in sorted {
        atoms.push(Atom::triplet(t));
    }
    atoms.push(Atom::logical_rel(group.logical_rel));
    Ok(atoms)
}

/// Atoms of a whole tree: node tuples concatenated in preorder (depth-first)
/// order. Role atoms are always included — trees carry roles.
pub fn tree_tuple(tree: &Mdt) -> Vec<Atom> {
    let mut atoms = Vec::new();
    for node in tree.nodes() {
        atoms.extend(node_tuple(node, true));
    }
    atoms
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::edit::AtomKind;
    use crate::tree::{LogicalRel, RelationType, Role, Triplet};

    fn trip(s: &str, o: &str) -> Triplet {
        Triplet::new(s, RelationType::ClinicalFeature, o)
    }

    #[test]
    fn tuple_orders_triplets_canonically() {
        let node = MdtNode::new(
            Role::Condition,
            vec![trip("b", "x"), trip("a", "y")],
            LogicalRel::And,
        );
        let atoms = node_tuple(&node, false);
        assert_eq!(atoms.len(), 3);
        assert!(atoms[0].payload.starts_with("a|"));
        assert!(atoms[1].payload.starts_with("b|"));
        assert_eq!(atoms[2].kind, AtomKind::LogicalRel);
    }

    #[test]
    fn role_atom_leads_when_included() {
        let node = MdtNode::new(Role::Decision, vec![trip("a", "b")], LogicalRel::Null);
        let atoms = node_tuple(&node, true);
        assert_eq!(atoms[0], Atom::role(Role::Decision));
        assert_eq!(atoms.len(), 3);
    }

    #[test]
    fn empty_placeholder_tuple() {
        let node = MdtNode::new(Role::Decision, vec![], LogicalRel::Null);
        assert_eq!(node_tuple(&node, false), vec![Atom::logical_rel(LogicalRel::Null)]);
    }

    #[test]
    fn group_without_role_errors_only_when_role_requested() {
        let group = NodeGroup::new(vec![trip("a", "b")], LogicalRel::Null);
        assert!(group_tuple(&group, false).is_ok());
        assert_eq!(group_tuple(&group, true), Err(MetricError::MissingRole));
    }

    #[test]
    fn duplicate_triplets_are_kept() {
        let t = trip("a", "b");
        let node = MdtNode::new(Role::Decision, vec![t.clone(), t], LogicalRel::And);
        assert_eq!(node_tuple(&node, false).len(), 3);
    }
}
