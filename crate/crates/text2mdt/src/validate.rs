//! Structural validation of preorder node sequences.
//!
//! Validation never fails on bad data — rule violations are collected into a
//! report so callers can show every problem at once. Only an empty input is
//! an error, since there is nothing to report on.

use serde::Serialize;

use crate::tree::{LogicalRel, MdtNode, Role, TreeError};

/// Validation strictness. Lenient mode downgrades vocabulary issues
/// (unknown relation labels) to warnings so data from future dataset
/// revisions still round-trips.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Strict,
    Lenient,
}

/// Stable rule identifiers, used in reports and CLI output.
pub mod rules {
    /// `logical_rel` is AND/OR but the node has ≤ 1 triplet.
    pub const LOGIC_REL_EXTRA: &str = "logic-rel-extra";
    /// `logical_rel` is NULL but the node has ≥ 2 triplets.
    pub const LOGIC_REL_MISSING: &str = "logic-rel-missing";
    /// A condition node has an empty triplet list.
    pub const CONDITION_NO_TRIPLETS: &str = "condition-no-triplets";
    /// A triplet subject or object is empty.
    pub const EMPTY_SPAN: &str = "empty-span";
    /// A relation label outside the closed six-type vocabulary.
    pub const UNKNOWN_RELATION: &str = "unknown-relation";
    /// A condition node runs out of children in the preorder sequence.
    pub const PREMATURE_END: &str = "premature-end";
    /// Nodes remain after the root subtree is complete.
    pub const LEFTOVER_NODES: &str = "leftover-nodes";
    /// Tree depth outside the 2–4 range observed in the dataset.
    pub const DEPTH_RANGE: &str = "depth-range";
}

/// One rule hit: which rule, where, and a human-readable message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Preorder index of the offending node, when the rule is node-local.
    pub node: Option<usize>,
    /// Stable rule id from [`rules`].
    pub rule: &'static str,
    pub message: String,
}

impl Violation {
    fn at(node: usize, rule: &'static str, message: String) -> Self {
        Violation {
            node: Some(node),
            rule,
            message,
        }
    }

    fn global(rule: &'static str, message: String) -> Self {
        Violation {
            node: None,
            rule,
            message,
        }
    }
}

/// Outcome of [`validate_tree`]: violations make the sequence invalid,
/// warnings are advisory (depth outside the dataset range, unknown relation
/// labels in lenient mode).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every node-local and structural invariant of a preorder sequence
/// and reports all rule hits. Violations are data, not failures; only an
/// empty sequence is an error.
pub fn validate_tree(nodes: &[MdtNode], mode: Mode) -> Result<ValidationReport, TreeError> {
    if nodes.is_empty() {
        return Err(TreeError::MalformedInput);
    }
    let mut report = ValidationReport::default();

    for (i, node) in nodes.iter().enumerate() {
        let n = node.triplets.len();
        match (node.logical_rel, n) {
            (LogicalRel::And | LogicalRel::Or, 0 | 1) => {
                report.violations.push(Violation::at(
                    i,
                    rules::LOGIC_REL_EXTRA,
                    format!(
                        "logical_rel is {} but the node has {n} triplet(s); must be null when there are at most one",
                        node.logical_rel
                    ),
                ));
            }
            (LogicalRel::Null, 2..) => {
                report.violations.push(Violation::at(
                    i,
                    rules::LOGIC_REL_MISSING,
                    format!("logical_rel is null but the node has {n} triplets; must be and/or"),
                ));
            }
            _ => {}
        }
        if node.role == Role::Condition && n == 0 {
            report.violations.push(Violation::at(
                i,
                rules::CONDITION_NO_TRIPLETS,
                "condition node has no triplets; only decision placeholders may be empty".into(),
            ));
        }
        for t in &node.triplets {
            if t.subject.is_empty() || t.object.is_empty() {
                report.violations.push(Violation::at(
                    i,
                    rules::EMPTY_SPAN,
                    format!("triplet {t} has an empty subject or object span"),
                ));
            }
            if !t.relation.is_known() {
                let v = Violation::at(
                    i,
                    rules::UNKNOWN_RELATION,
                    format!("relation label {:?} is outside the known vocabulary", t.relation.label()),
                );
                match mode {
                    Mode::Strict => report.violations.push(v),
                    Mode::Lenient => report.warnings.push(v),
                }
            }
        }
    }

    // Structural pass: reuse the preorder reconstruction and translate its
    // errors into violations so node-local and structural problems are
    // reported together.
    match crate::tree::Mdt::from_preorder(nodes.to_vec()) {
        Ok(tree) => {
            let depth = tree.depth();
            if depth < 2 {
                report.warnings.push(Violation::global(
                    rules::DEPTH_RANGE,
                    format!("tree depth {depth} is below the dataset range 2-4"),
                ));
            }
        }
        Err(TreeError::PrematureExhaustion { index }) => {
            report.violations.push(Violation::at(
                index,
                rules::PREMATURE_END,
                "condition node is missing a child in the preorder sequence".into(),
            ));
        }
        Err(TreeError::LeftoverNodes { count }) => {
            report.violations.push(Violation::global(
                rules::LEFTOVER_NODES,
                format!("{count} node(s) left over after the root subtree was completed"),
            ));
        }
        Err(e) => return Err(e),
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{RelationType, Triplet};

    fn trip(s: &str, o: &str) -> Triplet {
        Triplet::new(s, RelationType::MedicalOption, o)
    }

    fn node(role: Role, triplets: Vec<Triplet>, lr: LogicalRel) -> MdtNode {
        MdtNode::new(role, triplets, lr)
    }

    #[test]
    fn minimal_valid_tree() {
        let nodes = vec![
            node(
                Role::Condition,
                vec![trip("a", "b"), trip("c", "d")],
                LogicalRel::And,
            ),
            node(Role::Decision, vec![trip("e", "f")], LogicalRel::Null),
            node(Role::Decision, vec![], LogicalRel::Null),
        ];
        let report = validate_tree(&nodes, Mode::Strict).unwrap();
        assert!(report.is_valid(), "{:?}", report.violations);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn leftover_decision_pair() {
        let nodes = vec![
            node(Role::Decision, vec![trip("a", "b")], LogicalRel::Null),
            node(Role::Decision, vec![trip("c", "d")], LogicalRel::Null),
        ];
        let report = validate_tree(&nodes, Mode::Strict).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].rule, rules::LEFTOVER_NODES);
    }

    #[test]
    fn and_with_single_triplet() {
        let nodes = vec![
            node(Role::Condition, vec![trip("a", "b")], LogicalRel::And),
            node(Role::Decision, vec![trip("c", "d")], LogicalRel::Null),
            node(Role::Decision, vec![], LogicalRel::Null),
        ];
        let report = validate_tree(&nodes, Mode::Strict).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].rule, rules::LOGIC_REL_EXTRA);
        assert_eq!(report.violations[0].node, Some(0));
    }

    #[test]
    fn null_with_two_triplets() {
        let nodes = vec![node(
            Role::Decision,
            vec![trip("a", "b"), trip("c", "d")],
            LogicalRel::Null,
        )];
        let report = validate_tree(&nodes, Mode::Strict).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == rules::LOGIC_REL_MISSING));
    }

    #[test]
    fn empty_condition_node() {
        let nodes = vec![
            node(Role::Condition, vec![], LogicalRel::Null),
            node(Role::Decision, vec![trip("a", "b")], LogicalRel::Null),
            node(Role::Decision, vec![], LogicalRel::Null),
        ];
        let report = validate_tree(&nodes, Mode::Strict).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == rules::CONDITION_NO_TRIPLETS));
    }

    #[test]
    fn unknown_relation_strict_vs_lenient() {
        let t = Triplet::new("s", RelationType::from_label("future_rel"), "o");
        let nodes = vec![node(Role::Decision, vec![t], LogicalRel::Null)];
        let strict = validate_tree(&nodes, Mode::Strict).unwrap();
        assert!(strict
            .violations
            .iter()
            .any(|v| v.rule == rules::UNKNOWN_RELATION));
        let lenient = validate_tree(&nodes, Mode::Lenient).unwrap();
        assert!(lenient.is_valid());
        assert!(lenient
            .warnings
            .iter()
            .any(|v| v.rule == rules::UNKNOWN_RELATION));
    }

    #[test]
    fn empty_span_flagged() {
        let t = Triplet::new("", RelationType::MedicalOption, "o");
        let nodes = vec![node(Role::Decision, vec![t], LogicalRel::Null)];
        let report = validate_tree(&nodes, Mode::Lenient).unwrap();
        assert!(report.violations.iter().any(|v| v.rule == rules::EMPTY_SPAN));
    }

    #[test]
    fn single_node_depth_warning() {
        let nodes = vec![node(Role::Decision, vec![trip("a", "b")], LogicalRel::Null)];
        let report = validate_tree(&nodes, Mode::Strict).unwrap();
        assert!(report.is_valid());
        assert!(report.warnings.iter().any(|v| v.rule == rules::DEPTH_RANGE));
    }

    #[test]
    fn premature_end_reports_condition_index() {
        let nodes = vec![
            node(Role::Condition, vec![trip("a", "b")], LogicalRel::Null),
            node(Role::Decision, vec![trip("c", "d")], LogicalRel::Null),
        ];
        let report = validate_tree(&nodes, Mode::Strict).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].rule, rules::PREMATURE_END);
        assert_eq!(report.violations[0].node, Some(0));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(validate_tree(&[], Mode::Strict), Err(TreeError::MalformedInput));
    }
}
