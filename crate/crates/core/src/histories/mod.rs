//! Per-vertex histories: how each vertex of the input graph was split by the
//! unfolding, and where the special face walks pass through its copies at
//! every stage.
//!
//! A history is a tree whose level-`l` nodes are the copies of the vertex
//! in the stage-`l` graph. Leaves are the vertex's copies in the planar
//! graph, numbered 1.. in depth-first order with the primed child first, so
//! every node covers a contiguous range of those numbers.

mod build;
mod check;
mod index;
pub mod mutate;
mod reconstruct;
mod rules;
mod text;

pub use build::{build_histories, fill_footprints_upward, number_chains, seed_leaf_footprints, Genealogy};
pub use check::{check_local_consistency, check_vertex, Clause, Report, Violation};
pub use index::Stages;
pub use reconstruct::{reconstruct_trace, NodeIds};
pub use rules::{classify, RuleKind};
pub use text::format_histories;

use crate::graph::{Edge, VertexId};
use crate::surgery::{path_faces, FaceLabel, Params, StepKind};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// A vertex of the planar graph: copy number `index` of `vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Avatar {
    pub vertex: VertexId,
    pub index: u32,
}

impl fmt::Display for Avatar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.vertex, self.index)
    }
}

/// A vertex of some stage graph, named by the history node it is: the node
/// of `vertex`'s history, at the level in context, whose avatar range
/// starts at `first`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StageVertex {
    pub vertex: VertexId,
    pub first: u32,
}

impl fmt::Display for StageVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.vertex, self.first)
    }
}

/// The step that created an edge, and which of the two copies it lies on.
/// Doubling copies are not told apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeType {
    CycleLeft(u32),
    CycleRight(u32),
    PathLeft(u32),
    PathRight(u32),
    Doubled(u32),
}

impl EdgeType {
    pub fn step(self) -> (StepKind, u32) {
        match self {
            EdgeType::CycleLeft(i) | EdgeType::CycleRight(i) => (StepKind::CycleDup, i),
            EdgeType::PathLeft(i) | EdgeType::PathRight(i) => (StepKind::PathDup, i),
            EdgeType::Doubled(i) => (StepKind::CycleDouble, i),
        }
    }

    /// Level of the step that creates edges of this type.
    pub fn created(self, p: &Params) -> Option<usize> {
        let (kind, i) = self.step();
        p.level_of(kind, i)
    }

    /// Type of the primed (`second == false`) or double-primed copy of an
    /// object edge cut at the given step.
    pub fn of_copy(kind: StepKind, index: u32, second: bool) -> EdgeType {
        match (kind, second) {
            (StepKind::CycleDup, false) => EdgeType::CycleLeft(index),
            (StepKind::CycleDup, true) => EdgeType::CycleRight(index),
            (StepKind::PathDup, false) => EdgeType::PathLeft(index),
            (StepKind::PathDup, true) => EdgeType::PathRight(index),
            (StepKind::CycleDouble, _) => EdgeType::Doubled(index),
        }
    }

    /// The special face whose boundary carries edges of this type at stage
    /// `level`, or `None` before the edge exists.
    pub fn face_at(self, p: &Params, level: usize) -> Option<FaceLabel> {
        let created = self.created(p)?;
        if level < created {
            return None;
        }
        let mut face = match self {
            EdgeType::CycleLeft(i) => FaceLabel::CycleLeft(i),
            EdgeType::CycleRight(i) => FaceLabel::CycleRight(i),
            EdgeType::Doubled(i) => FaceLabel::Doubled(i),
            EdgeType::PathLeft(j) | EdgeType::PathRight(j) => FaceLabel::Merged(j),
        };
        for j in 1..=p.path_count() {
            let at = p.level_of(StepKind::PathDup, j)?;
            if at > created && at <= level {
                let (chi, psi) = path_faces(p, j);
                if face == chi || face == psi {
                    face = FaceLabel::Merged(j);
                }
            }
        }
        Some(face)
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeType::CycleLeft(i) => write!(f, "C'{i}"),
            EdgeType::CycleRight(i) => write!(f, "C\"{i}"),
            EdgeType::PathLeft(i) => write!(f, "P'{i}"),
            EdgeType::PathRight(i) => write!(f, "P\"{i}"),
            EdgeType::Doubled(i) => write!(f, "D'{i}"),
        }
    }
}

/// One passage of a special face walk through a stage vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Footprint {
    pub pred: StageVertex,
    pub succ: StageVertex,
    pub type_in: EdgeType,
    pub type_out: EdgeType,
    /// Position of the passage along its walk.
    pub counter: u32,
}

impl Footprint {
    /// The footprint with the counter cleared, for comparisons where walk
    /// positions do not carry over.
    pub fn shape(&self) -> (StageVertex, StageVertex, EdgeType, EdgeType) {
        (self.pred, self.succ, self.type_in, self.type_out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryNode {
    pub level: usize,
    /// Avatars `first..=last` descend from this node.
    pub first: u32,
    pub last: u32,
    pub footprints: Vec<Footprint>,
    /// Primed copy first when split.
    pub children: Vec<HistoryNode>,
}

impl HistoryNode {
    pub fn avatar_count(&self) -> u32 {
        self.last + 1 - self.first
    }

    pub fn is_split(&self) -> bool {
        self.children.len() == 2
    }

    /// Nodes in preorder.
    pub fn walk(&self) -> Vec<&HistoryNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(node.children.iter().rev());
        }
        out
    }

    pub fn walk_mut(&mut self, f: &mut impl FnMut(&mut HistoryNode)) {
        f(self);
        for c in &mut self.children {
            c.walk_mut(f);
        }
    }
}

/// Which walk a footprint belongs to: the stage and the face.
pub type ChainKey = (usize, FaceLabel);

/// Where a special walk starts, and how long it is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainInfo {
    /// The vertex holding the passage numbered 0.
    pub root: VertexId,
    pub len: u32,
}

/// The histories of all vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryCollection {
    pub params: Params,
    pub histories: BTreeMap<VertexId, HistoryNode>,
    /// Edges of the planar graph grouped by the edge they project to, each
    /// as (avatar index at `edge.0`, avatar index at `edge.1`).
    pub links: BTreeMap<Edge, Vec<(u32, u32)>>,
    pub chains: BTreeMap<ChainKey, ChainInfo>,
    /// The directed walk of the last special face, which the leaf
    /// footprints must realize.
    pub walk: Vec<Avatar>,
}

impl HistoryCollection {
    pub fn depth(&self) -> usize {
        self.params.depth()
    }

    pub fn avatar_count(&self) -> usize {
        self.histories.values().map(|h| h.avatar_count() as usize).sum()
    }

    /// Chains that must exist for these parameters, in canonical order.
    pub fn expected_chains(params: &Params) -> Vec<ChainKey> {
        (1..=params.depth()).flat_map(|l| params.labels_at(l).into_iter().map(move |f| (l, f))).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HistoryError {
    #[error("walk visits {0}, which no history contains")]
    WalkMismatch(VertexId),
    #[error("no rule applies at {vertex} level {level}: {what}")]
    NoRuleApplies { vertex: VertexId, level: usize, what: &'static str },
    #[error("footprints at level {level} disagree with the recorded walk of {face}")]
    ChainMismatch { level: usize, face: FaceLabel },
}
