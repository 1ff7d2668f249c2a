//! Unfolding an embedded graph onto the plane, and folding it back.
//!
//! Cycles are duplicated (orientable surfaces) or doubled (one-sided
//! cycles) until the surface is a sphere, and the faces created along the
//! way are then merged into one by duplicating paths between them.

mod ledger;
mod ops;
mod pipeline;
mod refold;
mod search;
pub mod text;

pub use ledger::{ledger, Counts, LedgerEntry};
pub use ops::{
    cycle_sign, double_cycle, duplicate_cycle, duplicate_path, CornerOrigin, Gap, GapOrigin, Splitting, Surgery,
};
pub use pipeline::{
    path_faces, special_order, unfold, unfold_with, FaceLabel, Params, Slot, SlotOrigin, StepKind, SurgeryStep,
    UnfoldingTrace,
};
pub use refold::{refold, Condition};
pub use search::{
    cut_lowers_genus, find_connecting_path, find_non_separating_cycle, homology_basis_cycles, simple_cycles_of_length,
    DEFAULT_MAX_CYCLE_LEN,
};

use crate::embedding::EmbeddingError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("object is not a simple cycle or path of the graph")]
    NotSimple,
    #[error("cycle is one-sided")]
    OneSidedCycle,
    #[error("cycle is two-sided")]
    TwoSidedCycle,
    #[error("cutting the cycle disconnects the graph")]
    SeparatingCycle,
    #[error("path interior touches a face it connects")]
    PathTouchesBoundary,
    #[error("path endpoints lie on the same face")]
    SameFace,
    #[error("cut gap is missing or adjacent to the path")]
    BadCorner,
    #[error("no non-separating cycle found")]
    NoCycleFound,
    #[error("unfolding stuck: {0}")]
    Stuck(String),
    #[error("global consistency violated ({condition:?}) at stage {stage}")]
    GlobalInconsistency { condition: Condition, stage: usize },
}
