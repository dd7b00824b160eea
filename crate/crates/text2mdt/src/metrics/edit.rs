//! Atoms and the insert/delete edit distance they are measured with.
//!
//! Node tuples are flattened into sequences of indivisible atoms; the edit
//! distance allows insertions and deletions at cost 1 each (no substitution),
//! so `ed(a, b) = len(a) + len(b) - 2 * lcs(a, b)`.

use std::collections::HashMap;
use std::fmt;

use crate::tree::{LogicalRel, Role, Triplet};

/// What an atom stands for. Kinds are part of equality, so a role label can
/// never collide with, say, a logical-relation label of the same spelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    Role,
    Triplet,
    LogicalRel,
}

/// An indivisible unit of the edit distance: either a whole triplet, a role
/// label or a logical-relation label, rendered as a canonical string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub payload: String,
}

impl Atom {
    pub fn role(role: Role) -> Self {
        Atom {
            kind: AtomKind::Role,
            payload: role.label().to_owned(),
        }
    }

    pub fn logical_rel(lr: LogicalRel) -> Self {
        Atom {
            kind: AtomKind::LogicalRel,
            payload: lr.label().to_owned(),
        }
    }

    /// Renders a triplet as one atom. Fields are joined with `|` after
    /// escaping (`\` → `\\`, `|` → `\|`), so atom equality coincides with
    /// triplet equality even when spans contain the separator.
    pub fn triplet(t: &Triplet) -> Self {
        let mut payload = String::new();
        escape_into(&t.subject, &mut payload);
        payload.push('|');
        escape_into(t.relation.label(), &mut payload);
        payload.push('|');
        escape_into(&t.object, &mut payload);
        Atom {
            kind: AtomKind::Triplet,
            payload,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.payload)
    }
}

fn escape_into(field: &str, out: &mut String) {
    for c in field.chars() {
        if c == '\\' || c == '|' {
            out.push('\\');
        }
        out.push(c);
    }
}

/// Minimal number of single-atom insertions and deletions transforming `a`
/// into `b`. Two-row dynamic program, O(len(a) * len(b)) time, O(len(b))
/// space.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.iter().enumerate() {
        let mut prev_diag = row[0];
        row[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let keep = if x == y { prev_diag } else { usize::MAX };
            prev_diag = row[j + 1];
            row[j + 1] = keep.min(row[j] + 1).min(row[j + 1] + 1);
        }
    }
    row[b.len()]
}

/// Maps atoms to dense integer ids so the permutation search can compare
/// symbols with plain integer equality.
#[derive(Debug, Default)]
pub(crate) struct Interner {
    ids: HashMap<Atom, u32>,
}

impl Interner {
    pub(crate) fn intern(&mut self, atom: &Atom) -> u32 {
        if let Some(&id) = self.ids.get(atom) {
            return id;
        }
        let id = self.ids.len() as u32;
        self.ids.insert(atom.clone(), id);
        id
    }

    pub(crate) fn intern_seq(&mut self, atoms: &[Atom]) -> Vec<u32> {
        atoms.iter().map(|a| self.intern(a)).collect()
    }
}
