//! The full unfolding: cycle doublings, cycle duplications, then path
//! duplications, with the special faces tracked stage by stage.

use super::ops::{double_cycle, duplicate_cycle, duplicate_path, CornerOrigin, Gap, Splitting, Surgery};
use super::search::{find_connecting_path, find_non_separating_cycle, DEFAULT_MAX_CYCLE_LEN};
use super::SurgeryError;
use crate::embedding::{BoundaryWalk, EmbeddingScheme, SurfaceKind};
use crate::graph::{Edge, VertexId};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Names of the special faces. Indices count from 1 within each kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaceLabel {
    Doubled(u32),
    CycleLeft(u32),
    CycleRight(u32),
    Merged(u32),
}

impl fmt::Display for FaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceLabel::Doubled(i) => write!(f, "D{i}"),
            FaceLabel::CycleLeft(i) => write!(f, "L{i}"),
            FaceLabel::CycleRight(i) => write!(f, "R{i}"),
            FaceLabel::Merged(i) => write!(f, "M{i}"),
        }
    }
}

impl FromStr for FaceLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, num) = s.split_at(1.min(s.len()));
        let i: u32 = num.parse().map_err(|_| format!("bad face label `{s}`"))?;
        match head {
            "D" => Ok(FaceLabel::Doubled(i)),
            "L" => Ok(FaceLabel::CycleLeft(i)),
            "R" => Ok(FaceLabel::CycleRight(i)),
            "M" => Ok(FaceLabel::Merged(i)),
            _ => Err(format!("bad face label `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    CycleDup,
    PathDup,
    CycleDouble,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::CycleDup => "cycle-dup",
            StepKind::PathDup => "path-dup",
            StepKind::CycleDouble => "cycle-double",
        })
    }
}

/// Surface parameters fixing the shape of an unfolding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    pub orientable: bool,
    /// Genus when orientable, demigenus otherwise.
    pub genus: u32,
    pub doublings: u32,
    pub duplications: u32,
}

impl Params {
    pub fn orientable(genus: u32) -> Params {
        Params { orientable: true, genus, doublings: 0, duplications: genus }
    }

    pub fn non_orientable(genus: u32, doublings: u32) -> Params {
        Params { orientable: false, genus, doublings, duplications: genus.saturating_sub(doublings) / 2 }
    }

    pub fn surface(&self) -> SurfaceKind {
        SurfaceKind { orientable: self.orientable, genus: self.genus }
    }

    pub fn is_consistent(&self) -> bool {
        if self.orientable {
            self.doublings == 0 && self.duplications == self.genus
        } else {
            self.doublings >= 1 && self.doublings + 2 * self.duplications == self.genus
        }
    }

    pub fn face_count(&self) -> u32 {
        self.doublings + 2 * self.duplications
    }

    pub fn path_count(&self) -> u32 {
        self.face_count().saturating_sub(1)
    }

    pub fn schedule(&self) -> Vec<(StepKind, u32)> {
        let mut out = Vec::new();
        out.extend((1..=self.doublings).map(|i| (StepKind::CycleDouble, i)));
        out.extend((1..=self.duplications).map(|i| (StepKind::CycleDup, i)));
        out.extend((1..=self.path_count()).map(|i| (StepKind::PathDup, i)));
        out
    }

    pub fn depth(&self) -> usize {
        (self.doublings + self.duplications + self.path_count()) as usize
    }

    /// Special faces present after `stage` steps.
    pub fn labels_at(&self, stage: usize) -> Vec<FaceLabel> {
        let mut out: Vec<FaceLabel> = Vec::new();
        for &(kind, i) in self.schedule().iter().take(stage) {
            match kind {
                StepKind::CycleDouble => out.push(FaceLabel::Doubled(i)),
                StepKind::CycleDup => {
                    out.push(FaceLabel::CycleLeft(i));
                    out.push(FaceLabel::CycleRight(i));
                }
                StepKind::PathDup => {
                    let (chi, psi) = path_faces(self, i);
                    out.retain(|&l| l != chi && l != psi);
                    out.push(FaceLabel::Merged(i));
                }
            }
        }
        out.sort();
        out
    }

    pub fn final_label(&self) -> Option<FaceLabel> {
        let labels = self.labels_at(self.depth());
        debug_assert!(labels.len() <= 1);
        labels.first().copied()
    }

    /// The level at which the given step kind and index runs (1-based).
    pub fn level_of(&self, kind: StepKind, index: u32) -> Option<usize> {
        self.schedule().iter().position(|&s| s == (kind, index)).map(|p| p + 1)
    }
}

/// Created faces in the order the path duplications consume them.
pub fn special_order(p: &Params) -> Vec<FaceLabel> {
    let mut out: Vec<FaceLabel> = (1..=p.doublings).map(FaceLabel::Doubled).collect();
    for i in 1..=p.duplications {
        out.push(FaceLabel::CycleLeft(i));
        out.push(FaceLabel::CycleRight(i));
    }
    out
}

/// The two faces merged by the `j`-th path duplication.
pub fn path_faces(p: &Params, j: u32) -> (FaceLabel, FaceLabel) {
    let order = special_order(p);
    let chi = if j == 1 { order[0] } else { FaceLabel::Merged(j - 1) };
    (chi, order[j as usize])
}

/// A position on a special face walk at some stage.
pub type Slot = (FaceLabel, usize);

/// Where a walk position comes from one stage up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotOrigin {
    /// Same passage, through the parent vertex.
    Vacancy(Slot),
    /// Passage along a copy of the cut object; it has no parent passage.
    Object,
    /// Path endpoint passage made of halves of parent passages, on the side
    /// of the incoming and of the outgoing neighbor.
    Joint { incoming: Option<Slot>, outgoing: Option<Slot> },
}

#[derive(Clone, Debug)]
pub struct SurgeryStep {
    pub kind: StepKind,
    pub index: u32,
    /// The cut cycle or path, in the pre-step graph, listed in the direction
    /// its primed copy is walked.
    pub object: Vec<VertexId>,
    /// (primed, double-primed) copies of each object vertex.
    pub copies: Vec<(VertexId, VertexId)>,
    pub splitting: Splitting,
    /// Origin of every special-face position of the post-step stage.
    pub origins: BTreeMap<Slot, SlotOrigin>,
}

#[derive(Clone, Debug)]
pub struct UnfoldingTrace {
    pub params: Params,
    pub stages: Vec<EmbeddingScheme>,
    pub steps: Vec<SurgeryStep>,
    /// Directed walks of the special faces present at each stage.
    pub walks: Vec<BTreeMap<FaceLabel, BoundaryWalk>>,
}

impl UnfoldingTrace {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn unfolded(&self) -> &EmbeddingScheme {
        self.stages.last().expect("at least the input stage")
    }

    /// The walk of the single special face of the planar graph.
    pub fn special_walk(&self) -> Option<&BoundaryWalk> {
        let label = self.params.final_label()?;
        self.walks.last()?.get(&label)
    }
}

struct Raw {
    kind: StepKind,
    index: u32,
    object: Vec<VertexId>,
    surgery: Surgery,
    cut: Option<(Gap, Gap)>,
}

fn internal(msg: impl Into<String>) -> SurgeryError {
    SurgeryError::Stuck(msg.into())
}

/// Labels the special faces of the post-step scheme.
fn carry_labels(
    pre: &BTreeMap<FaceLabel, BoundaryWalk>,
    raw: &Raw,
    merged: Option<FaceLabel>,
) -> Result<BTreeMap<FaceLabel, BoundaryWalk>, SurgeryError> {
    let mut gap_label: BTreeMap<Gap, FaceLabel> = BTreeMap::new();
    for (&l, w) in pre {
        for c in &w.corners {
            gap_label.insert(c.gap(), l);
        }
    }
    let s = &raw.surgery;
    let mut out = BTreeMap::new();
    for face in s.scheme.trace_faces()? {
        let origins: Vec<CornerOrigin> = face.corners.iter().map(|&c| s.corner_origin(c)).collect();
        let label = if origins.iter().any(|o| matches!(o, CornerOrigin::Joint { .. })) {
            merged
        } else if origins.iter().all(|o| *o == CornerOrigin::New) {
            Some(match raw.kind {
                StepKind::CycleDouble => FaceLabel::Doubled(raw.index),
                StepKind::CycleDup if face.vertices().contains(&s.copies[0].0) => FaceLabel::CycleLeft(raw.index),
                StepKind::CycleDup => FaceLabel::CycleRight(raw.index),
                StepKind::PathDup => return Err(internal("path duplication created a face")),
            })
        } else {
            origins
                .iter()
                .find_map(|o| match o {
                    CornerOrigin::Old(pc) => Some(gap_label.get(&pc.gap()).copied()),
                    _ => None,
                })
                .flatten()
        };
        if let Some(l) = label {
            if out.insert(l, face).is_some() {
                return Err(internal(format!("face {l} found twice")));
            }
        }
    }
    Ok(out)
}

/// Unfolds a connected embedded graph onto the sphere.
pub fn unfold(scheme: &EmbeddingScheme) -> Result<UnfoldingTrace, SurgeryError> {
    unfold_with(scheme, DEFAULT_MAX_CYCLE_LEN)
}

pub fn unfold_with(scheme: &EmbeddingScheme, max_cycle_len: usize) -> Result<UnfoldingTrace, SurgeryError> {
    scheme.graph().validate().map_err(|e| SurgeryError::Embedding(e.into()))?;
    let kind = scheme.euler_genus()?;
    let mut cur = if kind.orientable { scheme.normalized_orientable().expect("orientable") } else { scheme.clone() };
    let mut stages = vec![cur.clone()];
    let mut labels: Vec<BTreeMap<FaceLabel, BoundaryWalk>> = vec![BTreeMap::new()];
    let mut raws: Vec<Raw> = Vec::new();
    let mut chi_now = cur.euler_characteristic()?;

    let mut push = |raw: Raw,
                    merged: Option<FaceLabel>,
                    cur: &mut EmbeddingScheme,
                    stages: &mut Vec<EmbeddingScheme>,
                    labels: &mut Vec<BTreeMap<FaceLabel, BoundaryWalk>>,
                    raws: &mut Vec<Raw>|
     -> Result<(), SurgeryError> {
        let next = carry_labels(labels.last().unwrap(), &raw, merged)?;
        let chi_after = raw.surgery.scheme.euler_characteristic()?;
        let want = match raw.kind {
            StepKind::CycleDup => 2,
            StepKind::CycleDouble => 1,
            StepKind::PathDup => 0,
        };
        if chi_after - chi_now != want {
            return Err(internal(format!("{} changed the Euler characteristic by {}", raw.kind, chi_after - chi_now)));
        }
        chi_now = chi_after;
        *cur = raw.surgery.scheme.clone();
        stages.push(cur.clone());
        labels.push(next);
        raws.push(raw);
        Ok(())
    };

    let mut doublings = 0;
    if !kind.orientable {
        loop {
            let cycle = find_non_separating_cycle(&cur, true, max_cycle_len, &boundary_edges(labels.last().unwrap()))?;
            let mut surgery = double_cycle(&cur, &cycle)?;
            doublings += 1;
            let switches = surgery.scheme.orienting_switches();
            if let Some(sw) = &switches {
                surgery.switch_children(sw);
            }
            let raw = Raw { kind: StepKind::CycleDouble, index: doublings, object: cycle, surgery, cut: None };
            push(raw, None, &mut cur, &mut stages, &mut labels, &mut raws)?;
            if switches.is_some() {
                break;
            }
            if doublings >= kind.genus {
                return Err(internal("doublings did not reach an orientable surface"));
            }
        }
    }
    let params =
        if kind.orientable { Params::orientable(kind.genus) } else { Params::non_orientable(kind.genus, doublings) };
    if !params.is_consistent() {
        return Err(internal(format!("inconsistent parameters {params:?}")));
    }
    for i in 1..=params.duplications {
        let cycle = find_non_separating_cycle(&cur, false, max_cycle_len, &boundary_edges(labels.last().unwrap()))?;
        let surgery = duplicate_cycle(&cur, &cycle)?;
        let raw = Raw { kind: StepKind::CycleDup, index: i, object: cycle, surgery, cut: None };
        push(raw, None, &mut cur, &mut stages, &mut labels, &mut raws)?;
    }
    for j in 1..=params.path_count() {
        let (chi, psi) = path_faces(&params, j);
        let here = labels.last().unwrap();
        let (wc, wp) = (
            here.get(&chi).ok_or_else(|| internal(format!("face {chi} missing")))?,
            here.get(&psi).ok_or_else(|| internal(format!("face {psi} missing")))?,
        );
        let (path, g1, g2) = find_connecting_path(&cur, wc, wp, &boundary_edges(here))?;
        let surgery = duplicate_path(&cur, &path, g1, g2)?;
        let raw = Raw { kind: StepKind::PathDup, index: j, object: path, surgery, cut: Some((g1, g2)) };
        push(raw, Some(FaceLabel::Merged(j)), &mut cur, &mut stages, &mut labels, &mut raws)?;
    }
    if cur.euler_genus()? != SurfaceKind::sphere() {
        return Err(internal("unfolded graph is not planar"));
    }
    for (l, want) in labels.iter().zip(0..) {
        let have: Vec<FaceLabel> = l.keys().copied().collect();
        if have != params.labels_at(want) {
            return Err(internal(format!("stage {want} has faces {have:?}")));
        }
    }
    orient(params, stages, raws, labels)
}

/// Edges on the boundary of some special face. Cutting along them would put
/// both sides of a copy on special faces, which edge types cannot describe.
fn boundary_edges(walks: &BTreeMap<FaceLabel, BoundaryWalk>) -> BTreeSet<Edge> {
    walks.values().flat_map(|w| w.darts()).map(|d| d.edge()).collect()
}

fn gap_index(walks: &BTreeMap<FaceLabel, BoundaryWalk>) -> BTreeMap<Gap, Slot> {
    let mut out = BTreeMap::new();
    for (&l, w) in walks {
        for (i, c) in w.corners.iter().enumerate() {
            out.insert(c.gap(), (l, i));
        }
    }
    out
}

/// Fixes walk directions from the last stage upwards, names the primed
/// copies accordingly and records slot origins.
fn orient(
    params: Params,
    stages: Vec<EmbeddingScheme>,
    mut raws: Vec<Raw>,
    mut walks: Vec<BTreeMap<FaceLabel, BoundaryWalk>>,
) -> Result<UnfoldingTrace, SurgeryError> {
    let depth = raws.len();
    for level in (1..=depth).rev() {
        let raw = &mut raws[level - 1];
        let s = &raw.surgery;
        let p = raw.object.len();
        // Name the primed copies and rotate created walks to start on them.
        match raw.kind {
            StepKind::CycleDup => {
                let lw = walks[level].get(&FaceLabel::CycleLeft(raw.index)).unwrap().clone();
                let pos = lw.vertices().iter().position(|&v| v == s.copies[0].0).unwrap();
                let next = lw.corners[(pos + 1) % lw.len()].vertex;
                let mut order: Vec<usize> = (0..p).collect();
                if next != s.copies[1 % p].0 {
                    order = std::iter::once(0).chain((1..p).rev()).collect();
                }
                let object: Vec<VertexId> = order.iter().map(|&i| raw.object[i]).collect();
                let copies: Vec<(VertexId, VertexId)> = order.iter().map(|&i| s.copies[i]).collect();
                walks[level].insert(FaceLabel::CycleLeft(raw.index), lw.rotated(pos));
                let rw = walks[level].get(&FaceLabel::CycleRight(raw.index)).unwrap().clone();
                let rpos = rw.vertices().iter().position(|&v| v == copies[0].1).unwrap();
                let rw = rw.rotated(rpos);
                if rw.corners[1].vertex != copies[p - 1].1 {
                    return Err(internal("duplicated cycle faces run the same way"));
                }
                walks[level].insert(FaceLabel::CycleRight(raw.index), rw);
                raw.object = object;
                raw.surgery.copies = copies;
            }
            StepKind::CycleDouble => {
                let label = FaceLabel::Doubled(raw.index);
                let w = walks[level].get(&label).unwrap().clone();
                let pos = w.vertices().iter().position(|&v| v == s.copies[0].0).unwrap();
                let w = w.rotated(pos);
                let vs = w.vertices();
                let par = &s.splitting.parent;
                let copies: Vec<(VertexId, VertexId)> = (0..p).map(|j| (vs[j], vs[p + j])).collect();
                for &(a, b) in &copies {
                    if par[&a] != par[&b] {
                        return Err(internal("doubled face is not a doubled cycle"));
                    }
                }
                raw.object = copies.iter().map(|(a, _)| par[a]).collect();
                raw.surgery.copies = copies;
                walks[level].insert(label, w);
            }
            StepKind::PathDup => {
                let label = FaceLabel::Merged(raw.index);
                let (chi_gap, _) = raw.cut.unwrap();
                let w = walks[level].get(&label).unwrap().clone();
                let (c0a, c0b) = s.copies[0];
                let pos = w
                    .corners
                    .iter()
                    .position(|&c| {
                        (c.vertex == c0a || c.vertex == c0b)
                            && matches!(s.corner_origin(c), CornerOrigin::Joint { incoming: Some(g), .. } if g == chi_gap)
                    })
                    .ok_or_else(|| internal("merged walk misses the path start"))?;
                if w.corners[pos].vertex == c0b {
                    raw.surgery.copies = s.copies.iter().map(|&(a, b)| (b, a)).collect();
                }
                walks[level].insert(label, w.rotated(pos));
            }
        }
        // Directions one stage up.
        let s = &raws[level - 1].surgery;
        let mut gap_label: BTreeMap<Gap, FaceLabel> = BTreeMap::new();
        for (&l, w) in &walks[level - 1] {
            for c in &w.corners {
                gap_label.insert(c.gap(), l);
            }
        }
        let mut directed: BTreeMap<FaceLabel, BoundaryWalk> = BTreeMap::new();
        for w in walks[level].values() {
            for &c in &w.corners {
                if let CornerOrigin::Old(pc) = s.corner_origin(c) {
                    if let Some(&l) = gap_label.get(&pc.gap()) {
                        if let std::collections::btree_map::Entry::Vacant(e) = directed.entry(l) {
                            let traced = stages[level - 1].trace_from(pc)?;
                            e.insert(traced);
                        }
                    }
                }
            }
        }
        if directed.len() != walks[level - 1].len() {
            return Err(internal(format!("lost track of a face above stage {level}")));
        }
        walks[level - 1] = directed;
    }
    // Slot origins.
    let mut steps = Vec::with_capacity(depth);
    for (i, raw) in raws.into_iter().enumerate() {
        let level = i + 1;
        let index = gap_index(&walks[level - 1]);
        let slot_of = |g: Gap| -> Result<Slot, SurgeryError> {
            index.get(&g).copied().ok_or_else(|| internal(format!("gap {g:?} is on no special face")))
        };
        let mut origins = BTreeMap::new();
        for (&l, w) in &walks[level] {
            for (pos, &c) in w.corners.iter().enumerate() {
                let o = match raw.surgery.corner_origin(c) {
                    CornerOrigin::Old(pc) => SlotOrigin::Vacancy(slot_of(pc.gap())?),
                    CornerOrigin::New => SlotOrigin::Object,
                    CornerOrigin::Joint { incoming, outgoing } => SlotOrigin::Joint {
                        incoming: incoming.map(slot_of).transpose()?,
                        outgoing: outgoing.map(slot_of).transpose()?,
                    },
                };
                origins.insert((l, pos), o);
            }
        }
        steps.push(SurgeryStep {
            kind: raw.kind,
            index: raw.index,
            object: raw.object,
            copies: raw.surgery.copies,
            splitting: raw.surgery.splitting,
            origins,
        });
    }
    Ok(UnfoldingTrace { params, stages, steps, walks })
}
