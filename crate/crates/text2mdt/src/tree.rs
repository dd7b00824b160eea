//! Domain model for medical decision trees (MDTs).
//!
//! An MDT is a binary tree of nodes. Internal nodes are *condition* nodes
//! whose judgment routes to the left ("Yes") or right ("No") child; leaf
//! nodes are *decision* nodes holding the treatment decision. Each node
//! carries a list of `(subject, relation, object)` triplets and the logical
//! connective (`and`/`or`) that joins them. Trees are stored and exchanged
//! as the preorder sequence of their nodes, which encodes the structure
//! uniquely once node roles are known.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised when a preorder node sequence cannot be assembled into a tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("empty node sequence")]
    MalformedInput,
    #[error("condition node at index {index} is missing a child in the preorder sequence")]
    PrematureExhaustion { index: usize },
    #[error("{count} node(s) left over after the root subtree was completed")]
    LeftoverNodes { count: usize },
    #[error("invalid tree: {0}")]
    InvalidTree(String),
}

/// The six relation types of the MDT triplet vocabulary, plus a catch-all
/// for labels outside the closed set (kept verbatim so lenient pipelines can
/// round-trip data from future dataset revisions).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RelationType {
    ClinicalFeature,
    TherapeuticDrug,
    MedicalOption,
    UsageOrDosage,
    ForbiddenDrug,
    BasicInformation,
    Other(String),
}

impl RelationType {
    pub const KNOWN_LABELS: [&'static str; 6] = [
        "clinical_feature",
        "therapeutic_drug",
        "medical_option",
        "usage_or_dosage",
        "forbidden_drug",
        "basic_information",
    ];

    /// Maps a label to a relation type. Canonical labels are matched
    /// case-insensitively; the Chinese labels used by the upstream dataset
    /// release are mapped to their canonical counterparts. Anything else is
    /// preserved as [`RelationType::Other`].
    pub fn from_label(label: &str) -> Self {
        let trimmed = label.trim();
        match trimmed.to_ascii_lowercase().as_str() {
            "clinical_feature" => return RelationType::ClinicalFeature,
            "therapeutic_drug" => return RelationType::TherapeuticDrug,
            "medical_option" => return RelationType::MedicalOption,
            "usage_or_dosage" => return RelationType::UsageOrDosage,
            "forbidden_drug" => return RelationType::ForbiddenDrug,
            "basic_information" => return RelationType::BasicInformation,
            _ => {}
        }
        match trimmed {
            "临床表现" => RelationType::ClinicalFeature,
            "治疗药物" => RelationType::TherapeuticDrug,
            "治疗方案" => RelationType::MedicalOption,
            "用法用量" => RelationType::UsageOrDosage,
            "禁用药物" => RelationType::ForbiddenDrug,
            "基本情况" | "基本信息" => RelationType::BasicInformation,
            other => RelationType::Other(other.to_owned()),
        }
    }

    /// The canonical label string.
    pub fn label(&self) -> &str {
        match self {
            RelationType::ClinicalFeature => "clinical_feature",
            RelationType::TherapeuticDrug => "therapeutic_drug",
            RelationType::MedicalOption => "medical_option",
            RelationType::UsageOrDosage => "usage_or_dosage",
            RelationType::ForbiddenDrug => "forbidden_drug",
            RelationType::BasicInformation => "basic_information",
            RelationType::Other(s) => s,
        }
    }

    /// True when the label belongs to the closed six-type vocabulary.
    pub fn is_known(&self) -> bool {
        !matches!(self, RelationType::Other(_))
    }

    fn variant_rank(&self) -> u8 {
        match self {
            RelationType::Other(_) => 1,
            _ => 0,
        }
    }
}

// Ordering is by canonical label so that triplet canonicalization is
// lexicographic on the printed form; the variant rank breaks the (unlikely)
// tie between a known relation and an `Other` carrying the same label,
// keeping Ord consistent with Eq.
impl Ord for RelationType {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.label()
            .cmp(other.label())
            .then(self.variant_rank().cmp(&other.variant_rank()))
    }
}

impl PartialOrd for RelationType {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for RelationType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for RelationType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(RelationType::from_label(&s))
    }
}

/// A `(subject, relation, object)` fact extracted from the source text.
/// Equality is exact string equality of all three components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triplet {
    pub subject: String,
    pub relation: RelationType,
    pub object: String,
}

impl Triplet {
    pub fn new(
        subject: impl Into<String>,
        relation: RelationType,
        object: impl Into<String>,
    ) -> Self {
        Triplet {
            subject: subject.into(),
            relation,
            object: object.into(),
        }
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.subject, self.relation, self.object)
    }
}

// The canonical wire form is a 3-element array `[subject, relation, object]`;
// an object form with common key spellings is accepted on input.
impl Serialize for Triplet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(3))?;
        seq.serialize_element(&self.subject)?;
        seq.serialize_element(self.relation.label())?;
        seq.serialize_element(&self.object)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Triplet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Arr(String, String, String),
            Map {
                #[serde(alias = "sub", alias = "head")]
                subject: String,
                #[serde(alias = "rel", alias = "predicate")]
                relation: String,
                #[serde(alias = "obj", alias = "tail")]
                object: String,
            },
        }
        let (subject, relation, object) = match Repr::deserialize(deserializer)? {
            Repr::Arr(s, r, o) => (s, r, o),
            Repr::Map {
                subject,
                relation,
                object,
            } => (subject, relation, object),
        };
        Ok(Triplet {
            subject,
            relation: RelationType::from_label(&relation),
            object,
        })
    }
}

/// Logical connective among a node's triplets. `Null` when the node holds at
/// most one triplet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogicalRel {
    And,
    Or,
    Null,
}

impl LogicalRel {
    pub fn label(self) -> &'static str {
        match self {
            LogicalRel::And => "and",
            LogicalRel::Or => "or",
            LogicalRel::Null => "null",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label.trim().to_ascii_lowercase().as_str() {
            "and" => Some(LogicalRel::And),
            "or" => Some(LogicalRel::Or),
            "null" | "none" | "" => Some(LogicalRel::Null),
            _ => None,
        }
    }
}

impl fmt::Display for LogicalRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for LogicalRel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for LogicalRel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        LogicalRel::from_label(&s)
            .ok_or_else(|| de::Error::custom(format!("unknown logical relation label {s:?}")))
    }
}

/// Node role: `Condition` nodes are internal, `Decision` nodes are leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Condition,
    Decision,
}

impl Role {
    pub fn label(self) -> &'static str {
        match self {
            Role::Condition => "C",
            Role::Decision => "D",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label.trim().to_ascii_lowercase().as_str() {
            "c" | "condition" | "cond" => Some(Role::Condition),
            "d" | "decision" | "dec" => Some(Role::Decision),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Role {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for Role {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Role::from_label(&s).ok_or_else(|| de::Error::custom(format!("unknown role label {s:?}")))
    }
}

/// One MDT node: role, triplet list and the logical relation joining the
/// triplets. Triplet order is preserved on I/O; metrics canonicalize it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdtNode {
    pub role: Role,
    #[serde(rename = "triples", alias = "triplets")]
    pub triplets: Vec<Triplet>,
    #[serde(rename = "logic_rel", alias = "logical_rel", alias = "logicalRel")]
    pub logical_rel: LogicalRel,
}

impl MdtNode {
    pub fn new(role: Role, triplets: Vec<Triplet>, logical_rel: LogicalRel) -> Self {
        MdtNode {
            role,
            triplets,
            logical_rel,
        }
    }

    /// Triplets in canonical order (lexicographic by subject, relation,
    /// object); duplicates are kept.
    pub fn sorted_triplets(&self) -> Vec<&Triplet> {
        let mut v: Vec<&Triplet> = self.triplets.iter().collect();
        v.sort();
        v
    }

    /// The node's triplets as a set (duplicates collapsed).
    pub fn triplet_set(&self) -> BTreeSet<&Triplet> {
        self.triplets.iter().collect()
    }
}

/// A node skeleton as produced by the node-grouping step: a triplet group
/// plus its logical relation, with the role optional (grouping does not
/// assign one; tree-derived groups carry it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeGroup {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    #[serde(rename = "triples", alias = "triplets")]
    pub triplets: Vec<Triplet>,
    #[serde(rename = "logic_rel", alias = "logical_rel", alias = "logicalRel")]
    pub logical_rel: LogicalRel,
}

impl NodeGroup {
    pub fn new(triplets: Vec<Triplet>, logical_rel: LogicalRel) -> Self {
        NodeGroup {
            role: None,
            triplets,
            logical_rel,
        }
    }

    /// Builds a group from a tree node, keeping the role.
    pub fn from_node(node: &MdtNode) -> Self {
        NodeGroup {
            role: Some(node.role),
            triplets: node.triplets.clone(),
            logical_rel: node.logical_rel,
        }
    }

    /// Forgets the role, as the node-grouping subtask sees it.
    pub fn without_role(mut self) -> Self {
        self.role = None;
        self
    }
}

impl From<&MdtNode> for NodeGroup {
    fn from(node: &MdtNode) -> Self {
        NodeGroup::from_node(node)
    }
}

/// Branch taken at each step of a decision path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    /// "Yes" branch of a condition node.
    Left,
    /// "No" branch of a condition node.
    Right,
    /// The final decision node.
    Terminal,
}

/// A root-to-leaf path. Every non-terminal step is a condition node together
/// with the branch taken; the last step is the decision leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionPath {
    steps: Vec<(usize, Branch)>,
}

impl DecisionPath {
    /// `(node index, branch)` pairs from the root to the leaf.
    pub fn steps(&self) -> &[(usize, Branch)] {
        &self.steps
    }

    /// Index of the decision leaf terminating the path.
    pub fn leaf(&self) -> usize {
        self.steps.last().expect("path is never empty").0
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// A structurally sound MDT: the preorder node sequence plus the child links
/// recovered from it. Construction via [`Mdt::from_preorder`] guarantees that
/// every condition node has exactly two children, every decision node is a
/// leaf, and the sequence is consumed exactly.
///
/// Values are immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mdt {
    nodes: Vec<MdtNode>,
    children: Vec<Option<(usize, usize)>>,
}

impl Mdt {
    /// Reconstructs the tree from a preorder node sequence. A condition node
    /// consumes its left subtree and then its right subtree; a decision node
    /// is a leaf. The reconstruction is deterministic and must consume the
    /// whole sequence.
    pub fn from_preorder(nodes: Vec<MdtNode>) -> Result<Self, TreeError> {
        if nodes.is_empty() {
            return Err(TreeError::MalformedInput);
        }
        let mut children: Vec<Option<(usize, usize)>> = vec![None; nodes.len()];
        let end = Self::consume_subtree(&nodes, 0, &mut children)?;
        if end != nodes.len() {
            return Err(TreeError::LeftoverNodes {
                count: nodes.len() - end,
            });
        }
        Ok(Mdt { nodes, children })
    }

    fn consume_subtree(
        nodes: &[MdtNode],
        start: usize,
        children: &mut [Option<(usize, usize)>],
    ) -> Result<usize, TreeError> {
        match nodes[start].role {
            Role::Decision => Ok(start + 1),
            Role::Condition => {
                let left = start + 1;
                if left >= nodes.len() {
                    return Err(TreeError::PrematureExhaustion { index: start });
                }
                let right = Self::consume_subtree(nodes, left, children)?;
                if right >= nodes.len() {
                    return Err(TreeError::PrematureExhaustion { index: start });
                }
                let end = Self::consume_subtree(nodes, right, children)?;
                children[start] = Some((left, right));
                Ok(end)
            }
        }
    }

    /// The nodes in preorder. This is also the serialized form: the preorder
    /// traversal of the reconstructed tree is exactly the stored sequence.
    pub fn nodes(&self) -> &[MdtNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &MdtNode {
        &self.nodes[index]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty sequences
    }

    pub fn root(&self) -> usize {
        0
    }

    /// `(left, right)` child indices of a condition node; `None` for leaves.
    pub fn children(&self, index: usize) -> Option<(usize, usize)> {
        self.children[index]
    }

    /// Consumes the tree, returning the preorder node sequence.
    pub fn into_preorder(self) -> Vec<MdtNode> {
        self.nodes
    }

    /// Number of levels; a single decision node has depth 1.
    pub fn depth(&self) -> usize {
        fn go(tree: &Mdt, index: usize) -> usize {
            match tree.children[index] {
                None => 1,
                Some((l, r)) => 1 + go(tree, l).max(go(tree, r)),
            }
        }
        go(self, 0)
    }

    pub fn condition_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.role == Role::Condition)
            .count()
    }

    pub fn decision_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.role == Role::Decision)
            .count()
    }

    /// All root-to-leaf paths, left to right. There is exactly one path per
    /// decision node.
    pub fn decision_paths(&self) -> Vec<DecisionPath> {
        let mut paths = Vec::with_capacity(self.decision_count());
        let mut stack = Vec::new();
        self.collect_paths(0, &mut stack, &mut paths);
        paths
    }

    fn collect_paths(
        &self,
        index: usize,
        prefix: &mut Vec<(usize, Branch)>,
        out: &mut Vec<DecisionPath>,
    ) {
        match self.children[index] {
            None => {
                let mut steps = prefix.clone();
                steps.push((index, Branch::Terminal));
                out.push(DecisionPath { steps });
            }
            Some((l, r)) => {
                prefix.push((index, Branch::Left));
                self.collect_paths(l, prefix, out);
                prefix.pop();
                prefix.push((index, Branch::Right));
                self.collect_paths(r, prefix, out);
                prefix.pop();
            }
        }
    }

    /// All triplets of the tree in preorder node order (a multiset:
    /// duplicates across nodes are preserved).
    pub fn triplets(&self) -> impl Iterator<Item = &Triplet> + '_ {
        self.nodes.iter().flat_map(|n| n.triplets.iter())
    }

    /// The tree's triplets with duplicates collapsed.
    pub fn unique_triplets(&self) -> BTreeSet<&Triplet> {
        self.triplets().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trip(s: &str, o: &str) -> Triplet {
        Triplet::new(s, RelationType::ClinicalFeature, o)
    }

    fn cond(triplets: Vec<Triplet>) -> MdtNode {
        let lr = if triplets.len() > 1 {
            LogicalRel::And
        } else {
            LogicalRel::Null
        };
        MdtNode::new(Role::Condition, triplets, lr)
    }

    fn dec(triplets: Vec<Triplet>) -> MdtNode {
        let lr = if triplets.len() > 1 {
            LogicalRel::Or
        } else {
            LogicalRel::Null
        };
        MdtNode::new(Role::Decision, triplets, lr)
    }

    #[test]
    fn smallest_condition_tree() {
        let nodes = vec![
            cond(vec![trip("a", "b")]),
            dec(vec![trip("c", "d")]),
            dec(vec![trip("e", "f")]),
        ];
        let tree = Mdt::from_preorder(nodes).unwrap();
        assert_eq!(tree.children(0), Some((1, 2)));
        assert_eq!(tree.depth(), 2);
        assert_eq!(tree.decision_paths().len(), 2);
    }

    #[test]
    fn nested_condition_on_no_branch() {
        // [C, D, C, D, D]: root condition, decision on "Yes", nested
        // condition with two decision leaves on "No".
        let nodes = vec![
            cond(vec![trip("a", "1")]),
            dec(vec![trip("b", "2")]),
            cond(vec![trip("c", "3")]),
            dec(vec![trip("d", "4")]),
            dec(vec![trip("e", "5")]),
        ];
        let tree = Mdt::from_preorder(nodes).unwrap();
        assert_eq!(tree.children(0), Some((1, 2)));
        assert_eq!(tree.children(2), Some((3, 4)));
        assert_eq!(tree.depth(), 3);
        assert_eq!(tree.decision_paths().len(), 3);
    }

    #[test]
    fn condition_missing_right_child() {
        let nodes = vec![cond(vec![trip("a", "b")]), dec(vec![trip("c", "d")])];
        assert_eq!(
            Mdt::from_preorder(nodes),
            Err(TreeError::PrematureExhaustion { index: 0 })
        );
    }

    #[test]
    fn leftover_after_root() {
        let nodes = vec![dec(vec![trip("a", "b")]), dec(vec![trip("c", "d")])];
        assert_eq!(
            Mdt::from_preorder(nodes),
            Err(TreeError::LeftoverNodes { count: 1 })
        );
    }

    #[test]
    fn empty_sequence_is_malformed() {
        assert_eq!(Mdt::from_preorder(Vec::new()), Err(TreeError::MalformedInput));
    }

    #[test]
    fn single_decision_node() {
        let tree = Mdt::from_preorder(vec![dec(vec![trip("a", "b")])]).unwrap();
        assert_eq!(tree.depth(), 1);
        let paths = tree.decision_paths();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].steps(), &[(0, Branch::Terminal)]);
    }

    #[test]
    fn triplet_multiset_keeps_duplicates() {
        let t = trip("x", "y");
        let nodes = vec![
            cond(vec![t.clone()]),
            dec(vec![t.clone(), trip("z", "w")]),
            dec(vec![]),
        ];
        let tree = Mdt::from_preorder(nodes).unwrap();
        assert_eq!(tree.triplets().count(), 3);
        assert_eq!(tree.unique_triplets().len(), 2);
    }

    #[test]
    fn relation_label_aliases() {
        assert_eq!(
            RelationType::from_label("临床表现"),
            RelationType::ClinicalFeature
        );
        assert_eq!(
            RelationType::from_label("Therapeutic_Drug"),
            RelationType::TherapeuticDrug
        );
        assert!(matches!(
            RelationType::from_label("weird_rel"),
            RelationType::Other(_)
        ));
    }

    #[test]
    fn relation_ord_matches_label_order() {
        let mut v = vec![
            RelationType::UsageOrDosage,
            RelationType::BasicInformation,
            RelationType::Other("aaa".into()),
        ];
        v.sort();
        assert_eq!(v[0].label(), "aaa");
        assert_eq!(v[1].label(), "basic_information");
    }

    #[test]
    fn node_serde_accepts_aliases() {
        let node: MdtNode = serde_json::from_str(
            r#"{"role":"C","triplets":[["s","clinical_feature","o"]],"logical_rel":"null"}"#,
        )
        .unwrap();
        assert_eq!(node.role, Role::Condition);
        assert_eq!(node.triplets.len(), 1);
        let json = serde_json::to_string(&node).unwrap();
        assert!(json.contains("\"triples\""));
        assert!(json.contains("\"logic_rel\""));
    }

    #[test]
    fn triplet_map_form() {
        let t: Triplet =
            serde_json::from_str(r#"{"sub":"s","rel":"therapeutic_drug","obj":"o"}"#).unwrap();
        assert_eq!(t, Triplet::new("s", RelationType::TherapeuticDrug, "o"));
    }
}
