//! Score-level decoders: biaffine pair scoring, the table-filling loss,
//! token-pair table decoding into triplets, node grouping with conflict
//! resolution, and constrained tree assembly. All functions operate on
//! externally supplied score tables; nothing here trains a model.

mod assembly;
mod biaffine;
mod grouping;
mod table;

pub use assembly::{decode_tree_assembly, Side, TREE_EDGE_LABELS};
pub use biaffine::{biaffine_score, softmax, BiaffineParams};
pub use grouping::{decode_node_grouping, NG_LABELS};
pub use table::{decode_triplet_table, table_loss, PairLabelTable, Span, TableDecode};

use thiserror::Error;

/// Errors raised by the decoders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cell ({i}, {j}) is not a probability distribution: {message}")]
    NormalizationError { i: usize, j: usize, message: String },
    #[error("unsupported label set: {0}")]
    InvalidLabelSet(String),
    #[error("invalid node skeleton at index {index}: {message}")]
    InvalidNodeSkeleton { index: usize, message: String },
    #[error(
        "decoding incomplete: parentless nodes {roots:?}, open condition slots {slots:?} \
         (use force mode to repair)"
    )]
    DecodingIncomplete {
        /// Nodes left without a parent (beyond the single allowed root).
        roots: Vec<usize>,
        /// Condition nodes with an unfilled child slot.
        slots: Vec<(usize, Side)>,
    },
}
