//! Medical decision tree (MDT) toolkit: the tree data model, evaluation
//! metrics, score-table decoders, dataset I/O and subtask builders behind the
//! `text2mdt` CLI.

pub mod data;
pub mod decode;
pub mod metrics;
pub mod tree;
pub mod validate;

pub use data::{DataError, MdtRecord};
pub use metrics::{EvalConfig, EvalReport, LrConvention, MetricError, Prf};

pub use tree::{
    Branch, DecisionPath, LogicalRel, Mdt, MdtNode, NodeGroup, RelationType, Role, TreeError,
    Triplet,
};
pub use validate::{validate_tree, Mode, ValidationReport, Violation};
