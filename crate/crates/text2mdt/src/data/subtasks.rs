//! Construction of the three pipeline subtask datasets: triplet extraction
//! (TE), node grouping (NG) and tree assembly (TA).
//!
//! NG and TA inputs are order-shuffled to stop models from memorizing the
//! canonical preorder: each record yields `max(1, augment_factor)` copies,
//! copy 0 in original order and every further copy independently shuffled.
//! Shuffles are deterministic — each (seed, subtask, record id, copy index)
//! selects an independent random stream, so output never depends on record
//! order or parallelism.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{DataError, MdtRecord};
use crate::tree::{MdtNode, NodeGroup, Triplet};

/// Triplet-extraction sample: text in, the record's triplets out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeRecord {
    pub id: String,
    pub text: String,
    pub triplets: Vec<Triplet>,
}

/// Node-grouping sample: text plus the (shuffled) triplet list in, the
/// role-less node groups out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgRecord {
    pub id: String,
    /// 0 = original order; ≥ 1 = shuffled augmentation copy.
    pub copy: usize,
    pub text: String,
    pub triplets: Vec<Triplet>,
    pub nodes: Vec<NodeGroup>,
}

/// Tree-assembly sample: text plus the (shuffled) role-less node list in,
/// the full preorder tree out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaRecord {
    pub id: String,
    pub copy: usize,
    pub text: String,
    pub nodes: Vec<NodeGroup>,
    pub tree: Vec<MdtNode>,
}

/// The three subtask datasets built from one record collection.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubtaskSets {
    pub te: Vec<TeRecord>,
    pub ng: Vec<NgRecord>,
    pub ta: Vec<TaRecord>,
}

/// Builds TE/NG/TA subtask records. TE gets one sample per record; NG and
/// TA get `max(1, augment_factor)` copies per record as described at module
/// level, so `augment_factor = 4` turns 800 records into 3200 NG and 3200
/// TA samples.
pub fn build_subtasks(records: &[MdtRecord], augment_factor: usize, seed: u64) -> SubtaskSets {
    let copies = augment_factor.max(1);
    let mut sets = SubtaskSets::default();
    for record in records {
        let triplets: Vec<Triplet> = record
            .tree
            .iter()
            .flat_map(|n| n.triplets.iter().cloned())
            .collect();
        let groups: Vec<NodeGroup> = record
            .tree
            .iter()
            .map(|n| NodeGroup::from_node(n).without_role())
            .collect();

        sets.te.push(TeRecord {
            id: record.id.clone(),
            text: record.text.clone(),
            triplets: triplets.clone(),
        });
        for copy in 0..copies {
            let mut ng_input = triplets.clone();
            let mut ta_input = groups.clone();
            if copy > 0 {
                shuffle(&mut ng_input, seed, "ng", &record.id, copy);
                shuffle(&mut ta_input, seed, "ta", &record.id, copy);
            }
            sets.ng.push(NgRecord {
                id: record.id.clone(),
                copy,
                text: record.text.clone(),
                triplets: ng_input,
                nodes: groups.clone(),
            });
            sets.ta.push(TaRecord {
                id: record.id.clone(),
                copy,
                text: record.text.clone(),
                nodes: ta_input,
                tree: record.tree.clone(),
            });
        }
    }
    sets
}

/// Fisher–Yates shuffle driven by a stream derived from
/// `SHA-256(seed, subtask, record id, copy)`, each field length-framed so
/// distinct inputs can never collide.
fn shuffle<T>(items: &mut [T], seed: u64, subtask: &str, id: &str, copy: usize) {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    for field in [subtask.as_bytes(), id.as_bytes()] {
        hasher.update((field.len() as u64).to_le_bytes());
        hasher.update(field);
    }
    hasher.update((copy as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(hasher.finalize().into());
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Writes `te.jsonl`, `ng.jsonl` and `ta.jsonl` into `outdir` (created if
/// missing), one JSON record per line.
pub fn write_subtasks(sets: &SubtaskSets, outdir: impl AsRef<Path>) -> Result<(), DataError> {
    let outdir = outdir.as_ref();
    fs::create_dir_all(outdir).map_err(|source| DataError::Io {
        path: outdir.display().to_string(),
        source,
    })?;
    write_jsonl(&outdir.join("te.jsonl"), &sets.te)?;
    write_jsonl(&outdir.join("ng.jsonl"), &sets.ng)?;
    write_jsonl(&outdir.join("ta.jsonl"), &sets.ta)
}

fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), DataError> {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("subtask serialization cannot fail"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })
}
