//! Constrained tree assembly: roles from per-node probabilities, structure
//! from greedy edge selection, and an optional repair pass that always
//! produces a valid tree.

use ndarray::Array2;

use super::{DecodeError, PairLabelTable};
use crate::tree::{LogicalRel, Mdt, MdtNode, NodeGroup, Role};

/// Column order of tree-edge tables: `left-child`, `right-child`, `none`.
/// Cell (p, c) scores "node c is the left/right child of node p".
pub const TREE_EDGE_LABELS: [&str; 3] = ["left-child", "right-child", "none"];

/// A condition node's child slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Tolerance for probability mass checks, matching [`PairLabelTable`].
const NORM_TOLERANCE: f64 = 1e-6;

/// Assembles node skeletons into a decision tree.
///
/// `role_probs` is `n × 2` with column 0 = condition, column 1 = decision;
/// each node takes its argmax role (ties go to condition), except that
/// empty-triplet nodes are always decisions — the formalism admits no empty
/// condition. Edge candidates are every (parent, child) cell of
/// `edge_probs` whose argmax is a child label, sorted by probability
/// descending (ties: smaller parent, then child index), and accepted
/// greedily when the child is unparented, the parent is a condition with
/// that slot free, and no cycle forms.
///
/// Without `force`, any leftover parentless node or open condition slot is
/// a [`DecodeError::DecodingIncomplete`]. With `force`, the decoder repairs
/// deterministically: surplus roots are attached into open slots of other
/// components; when no slot is open, the smallest-index decision node with
/// triplets is flipped to condition; when nothing is flippable (every
/// decision is an empty placeholder), components are merged by substituting
/// a placeholder leaf — or, between bare placeholders, surplus ones are
/// dropped. Remaining open slots are filled with fresh empty decision
/// placeholders. Forced output always satisfies every tree invariant.
pub fn decode_tree_assembly(
    role_probs: &Array2<f64>,
    edge_probs: &PairLabelTable,
    nodes: &[NodeGroup],
    force: bool,
) -> Result<Mdt, DecodeError> {
    let n = nodes.len();
    if n == 0 {
        return Err(DecodeError::DimensionMismatch(
            "tree assembly needs at least one node".into(),
        ));
    }
    if role_probs.dim() != (n, 2) {
        return Err(DecodeError::DimensionMismatch(format!(
            "role table must be {n} × 2, got {} × {}",
            role_probs.dim().0,
            role_probs.dim().1
        )));
    }
    for i in 0..n {
        let row = role_probs.row(i);
        let sum: f64 = row.sum();
        if row.iter().any(|&p| p < 0.0 || !p.is_finite()) || (sum - 1.0).abs() > NORM_TOLERANCE {
            return Err(DecodeError::NormalizationError {
                i,
                j: i,
                message: format!("role distribution of node {i} sums to {sum}, expected 1"),
            });
        }
    }
    if edge_probs.n() != n {
        return Err(DecodeError::DimensionMismatch(format!(
            "edge table is {0} × {0} but there are {n} nodes",
            edge_probs.n()
        )));
    }
    if edge_probs.k() != TREE_EDGE_LABELS.len() {
        return Err(DecodeError::DimensionMismatch(format!(
            "edge tables need {} labels {TREE_EDGE_LABELS:?}, got {}",
            TREE_EDGE_LABELS.len(),
            edge_probs.k()
        )));
    }
    for (index, g) in nodes.iter().enumerate() {
        if (g.logical_rel == LogicalRel::Null) != (g.triplets.len() <= 1) {
            return Err(DecodeError::InvalidNodeSkeleton {
                index,
                message: format!(
                    "logical_rel {} is inconsistent with {} triplet(s)",
                    g.logical_rel,
                    g.triplets.len()
                ),
            });
        }
    }

    let mut asm = Assembly::new(role_probs, nodes);

    // Candidate edges by probability, then smaller indices.
    let mut candidates: Vec<(f64, usize, usize, Side)> = Vec::new();
    for p in 0..n {
        for c in 0..n {
            if p == c {
                continue;
            }
            let (label, prob) = edge_probs.argmax(p, c);
            let side = match label {
                0 => Side::Left,
                1 => Side::Right,
                _ => continue,
            };
            candidates.push((prob, p, c, side));
        }
    }
    candidates.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .expect("probabilities are finite")
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    for &(_, p, c, side) in &candidates {
        asm.try_attach(p, c, side);
    }

    if !force {
        let roots = asm.live_roots();
        let slots = asm.open_slots();
        if roots.len() > 1 || !slots.is_empty() {
            return Err(DecodeError::DecodingIncomplete {
                roots: if roots.len() > 1 { roots } else { Vec::new() },
                slots,
            });
        }
        return Ok(asm.into_tree());
    }

    asm.repair();
    let tree = asm.into_tree();
    debug_assert!(
        crate::validate::validate_tree(tree.nodes(), crate::validate::Mode::Lenient)
            .map(|r| r.is_valid())
            .unwrap_or(false),
        "forced assembly must produce a valid tree"
    );
    Ok(tree)
}

/// Working state of the assembly: roles, parent/child links, a union-find
/// over components and the dropped-node set.
struct Assembly<'a> {
    nodes: &'a [NodeGroup],
    roles: Vec<Role>,
    parent: Vec<Option<usize>>,
    children: Vec<[Option<usize>; 2]>,
    dsu: Vec<usize>,
    dropped: Vec<bool>,
}

impl<'a> Assembly<'a> {
    fn new(role_probs: &Array2<f64>, nodes: &'a [NodeGroup]) -> Self {
        let n = nodes.len();
        let roles = (0..n)
            .map(|i| {
                if nodes[i].triplets.is_empty() {
                    Role::Decision
                } else if role_probs[(i, 0)] >= role_probs[(i, 1)] {
                    Role::Condition
                } else {
                    Role::Decision
                }
            })
            .collect();
        Assembly {
            nodes,
            roles,
            parent: vec![None; n],
            children: vec![[None; 2]; n],
            dsu: (0..n).collect(),
            dropped: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.dsu[x] != x {
            let root = self.find(self.dsu[x]);
            self.dsu[x] = root;
        }
        self.dsu[x]
    }

    fn try_attach(&mut self, p: usize, c: usize, side: Side) -> bool {
        let slot = side as usize;
        if self.parent[c].is_some()
            || self.roles[p] != Role::Condition
            || self.children[p][slot].is_some()
            || self.find(p) == self.find(c)
        {
            return false;
        }
        self.parent[c] = Some(p);
        self.children[p][slot] = Some(c);
        let (rp, rc) = (self.find(p), self.find(c));
        self.dsu[rc] = rp;
        true
    }

    fn live_roots(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| !self.dropped[i] && self.parent[i].is_none())
            .collect()
    }

    fn open_slots(&self) -> Vec<(usize, Side)> {
        let mut out = Vec::new();
        for i in 0..self.nodes.len() {
            if self.dropped[i] || self.roles[i] != Role::Condition {
                continue;
            }
            for (slot, side) in [(0, Side::Left), (1, Side::Right)] {
                if self.children[i][slot].is_none() {
                    out.push((i, side));
                }
            }
        }
        out
    }

    /// Merges everything into one component, in order of preference:
    /// cross-component root-into-slot attachment, then role flips to create
    /// slots, then placeholder substitution or removal.
    fn repair(&mut self) {
        loop {
            let roots = self.live_roots();
            if roots.len() <= 1 {
                break;
            }
            if self.attach_any_root(&roots) {
                continue;
            }
            // No cross-component slot: open two by flipping the first
            // decision node that may legally become a condition.
            if let Some(flip) = (0..self.nodes.len()).find(|&i| {
                !self.dropped[i]
                    && self.roles[i] == Role::Decision
                    && !self.nodes[i].triplets.is_empty()
            }) {
                self.roles[flip] = Role::Condition;
                continue;
            }
            // Every decision node is an empty placeholder. Substitute a
            // parented placeholder leaf with another component's root …
            if self.substitute_placeholder(&roots) {
                continue;
            }
            // … or, failing that, all components are bare placeholders:
            // keep the first, drop the rest (they carry no content).
            for &r in &roots[1..] {
                self.dropped[r] = true;
            }
        }
        // Finally give every remaining open slot an empty placeholder child
        // (materialized during preorder construction).
    }

    fn attach_any_root(&mut self, roots: &[usize]) -> bool {
        for (i, side) in self.open_slots() {
            for &r in roots {
                if self.find(r) != self.find(i) && self.try_attach(i, r, side) {
                    return true;
                }
            }
        }
        false
    }

    fn substitute_placeholder(&mut self, roots: &[usize]) -> bool {
        for leaf in 0..self.nodes.len() {
            if self.dropped[leaf]
                || !self.nodes[leaf].triplets.is_empty()
                || self.roles[leaf] != Role::Decision
            {
                continue;
            }
            let Some(p) = self.parent[leaf] else { continue };
            for &r in roots {
                if self.find(r) == self.find(p) {
                    continue;
                }
                let slot = if self.children[p][0] == Some(leaf) { 0 } else { 1 };
                self.parent[leaf] = None;
                self.children[p][slot] = None;
                self.dropped[leaf] = true;
                let side = if slot == 0 { Side::Left } else { Side::Right };
                let attached = self.try_attach(p, r, side);
                debug_assert!(attached, "cross-component substitution cannot fail");
                return true;
            }
        }
        false
    }

    /// Emits the preorder sequence from the unique root, materializing an
    /// empty decision placeholder for every still-open slot, and parses it
    /// back into a tree.
    fn into_tree(mut self) -> Mdt {
        let roots = self.live_roots();
        let root = *roots.first().expect("at least one live root");
        let mut seq = Vec::new();
        self.emit(root, &mut seq);
        Mdt::from_preorder(seq).expect("assembled preorder sequence is structurally sound")
    }

    fn emit(&mut self, i: usize, out: &mut Vec<MdtNode>) {
        out.push(MdtNode::new(
            self.roles[i],
            self.nodes[i].triplets.clone(),
            self.nodes[i].logical_rel,
        ));
        if self.roles[i] == Role::Condition {
            for slot in 0..2 {
                match self.children[i][slot] {
                    Some(c) => self.emit(c, out),
                    None => out.push(MdtNode::new(Role::Decision, Vec::new(), LogicalRel::Null)),
                }
            }
        }
    }
}
