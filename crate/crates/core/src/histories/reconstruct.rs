//! Turning a history collection back into an unfolding trace that
//! [`refold`](crate::surgery::refold) can check. Stage vertices get ids from
//! their history nodes; only the planar graph itself must be supplied, with
//! its vertices named by [`NodeIds::avatar_id`].

use super::index::Stages;
use super::{Avatar, HistoryCollection, StageVertex};
use crate::embedding::{BoundaryWalk, DirCorner, EmbeddingScheme};
use crate::graph::VertexId;
use crate::surgery::{FaceLabel, Splitting, StepKind, SurgeryStep, UnfoldingTrace};
use std::collections::BTreeMap;

/// Stage-vertex ids: the vertex itself at level 0, and a level-tagged rank
/// below that.
#[derive(Clone, Debug)]
pub struct NodeIds {
    ids: Vec<BTreeMap<StageVertex, VertexId>>,
}

const LEVEL_SHIFT: u32 = 22;

impl NodeIds {
    pub fn new(hc: &HistoryCollection) -> NodeIds {
        let depth = hc.depth();
        let mut ids = vec![BTreeMap::new(); depth + 1];
        for (&v, root) in &hc.histories {
            for x in root.walk() {
                if x.level <= depth {
                    let sv = StageVertex { vertex: v, first: x.first };
                    let id =
                        if x.level == 0 { v } else { ((x.level as u32) << LEVEL_SHIFT) | ids[x.level].len() as u32 };
                    ids[x.level].insert(sv, id);
                }
            }
        }
        NodeIds { ids }
    }

    pub fn id(&self, level: usize, x: StageVertex) -> Option<VertexId> {
        self.ids.get(level)?.get(&x).copied()
    }

    pub fn avatar_id(&self, a: Avatar) -> Option<VertexId> {
        let leaf = StageVertex { vertex: a.vertex, first: a.index };
        self.ids.last()?.get(&leaf).copied()
    }
}

/// Reads the walk of one face at one level, ordered by position.
fn ordered_walk(
    hc: &HistoryCollection,
    st: &Stages<'_>,
    level: usize,
    face: FaceLabel,
) -> Result<Vec<(StageVertex, StageVertex, StageVertex)>, String> {
    let len = hc.chains.get(&(level, face)).ok_or(format!("no walk {face} at level {level}"))?.len as usize;
    let mut slots: Vec<Option<(StageVertex, StageVertex, StageVertex)>> = vec![None; len];
    for v in st.vertices() {
        for y in st.nodes_at(v, level) {
            let me = StageVertex { vertex: v, first: y.first };
            for f in &y.footprints {
                if f.type_in.face_at(&hc.params, level) != Some(face) {
                    continue;
                }
                let slot = slots.get_mut(f.counter as usize).ok_or("walk position out of range")?;
                if slot.replace((f.pred, me, f.succ)).is_some() {
                    return Err(format!("walk {face} at level {level} repeats a position"));
                }
            }
        }
    }
    slots.into_iter().collect::<Option<Vec<_>>>().ok_or(format!("walk {face} at level {level} has a gap"))
}

/// Builds the trace a history collection describes. The returned trace has
/// a single stage, `unfolded`, since refolding reads nothing else.
pub fn reconstruct_trace(hc: &HistoryCollection, unfolded: &EmbeddingScheme) -> Result<UnfoldingTrace, String> {
    let st = Stages::new(hc);
    if !st.malformed.is_empty() {
        return Err("malformed history".into());
    }
    let ids = NodeIds::new(hc);
    let depth = st.depth;
    let id =
        |level: usize, x: StageVertex| ids.id(level, x).ok_or(format!("unknown stage vertex {x} at level {level}"));

    let mut walks = Vec::with_capacity(depth + 1);
    let mut seqs: Vec<BTreeMap<FaceLabel, Vec<StageVertex>>> = Vec::with_capacity(depth + 1);
    for level in 0..=depth {
        let mut m = BTreeMap::new();
        let mut vs = BTreeMap::new();
        for face in hc.params.labels_at(level) {
            let seq = ordered_walk(hc, &st, level, face)?;
            vs.insert(face, seq.iter().map(|t| t.1).collect());
            let corners = seq
                .iter()
                .map(|&(p, x, s)| {
                    Ok(DirCorner { vertex: id(level, x)?, from: id(level, p)?, to: id(level, s)?, flag: 1 })
                })
                .collect::<Result<Vec<_>, String>>()?;
            m.insert(face, BoundaryWalk { corners });
        }
        walks.push(m);
        seqs.push(vs);
    }

    let mut steps = Vec::with_capacity(depth);
    for level in 1..=depth {
        let (kind, index) = st.step(level).unwrap();
        let mut parent = BTreeMap::new();
        for v in st.vertices() {
            for y in st.nodes_at(v, level) {
                let x = StageVertex { vertex: v, first: y.first };
                let p = st.parent(level, x).ok_or("orphan node")?;
                parent.insert(id(level, x)?, id(level - 1, p)?);
            }
        }
        let splitting = Splitting::from_parent(parent);
        let walk_of = |face: FaceLabel| -> Vec<StageVertex> { seqs[level][&face].clone() };
        let primed: Vec<StageVertex> = match kind {
            StepKind::CycleDup => walk_of(FaceLabel::CycleLeft(index)),
            StepKind::CycleDouble => {
                let d = walk_of(FaceLabel::Doubled(index));
                d[..d.len() / 2].to_vec()
            }
            StepKind::PathDup => {
                let m = walk_of(FaceLabel::Merged(index));
                let n = m.len();
                let is_primed = |i: usize| st.copy_side(level, m[i % n]) == Some(false);
                let start =
                    (0..n).find(|&i| is_primed(i) && !is_primed(i + n - 1)).ok_or("merged walk has no primed run")?;
                (0..n).map(|t| m[(start + t) % n]).take_while(|x| st.copy_side(level, *x) == Some(false)).collect()
            }
        };
        let mut object = Vec::new();
        let mut copies = Vec::new();
        for (t, &x) in primed.iter().enumerate() {
            let twin = match kind {
                StepKind::CycleDouble => {
                    let d = walk_of(FaceLabel::Doubled(index));
                    d[t + primed.len()]
                }
                _ => st.sibling(level, x).ok_or("copy without a sibling")?,
            };
            object.push(id(level - 1, st.parent(level, x).ok_or("orphan node")?)?);
            copies.push((id(level, x)?, id(level, twin)?));
        }
        steps.push(SurgeryStep { kind, index, object, copies, splitting, origins: BTreeMap::new() });
    }
    Ok(UnfoldingTrace { params: hc.params, stages: vec![unfolded.clone()], steps, walks })
}
