//! Local consistency of a history collection, globally and as seen from one
//! vertex. The global check assembles every special walk and compares it
//! with the walks one stage up; the per-vertex check only looks at a vertex
//! and its neighbors and checks walks link by link, using the walk
//! positions to rule out walks falling apart into several closed pieces.

use super::index::Stages;
use super::rules::{produce, same_shapes, RuleKind};
use super::{Avatar, ChainKey, Footprint, HistoryCollection, HistoryNode, StageVertex};
use crate::embedding::cyclic_eq;
use crate::graph::{Edge, Graph, VertexId};
use crate::surgery::{path_faces, FaceLabel, StepKind};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// The condition a violation falls under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    /// Histories, stage graphs, edge types and rule applications.
    Stages,
    /// The leaf footprints against the special walk of the planar graph.
    Leaves,
    Paths,
    Cycles,
    CrossCaps,
}

impl Clause {
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Clause::Stages => "stages",
            Clause::Leaves => "leaves",
            Clause::Paths => "paths",
            Clause::Cycles => "cycles",
            Clause::CrossCaps => "cross-caps",
        }
    }

    fn of_face(face: FaceLabel) -> Clause {
        match face {
            FaceLabel::Doubled(_) => Clause::CrossCaps,
            FaceLabel::CycleLeft(_) | FaceLabel::CycleRight(_) => Clause::Cycles,
            FaceLabel::Merged(_) => Clause::Paths,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub vertex: Option<VertexId>,
    pub level: usize,
    pub what: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {} at level {}", self.clause.number(), self.level)?;
        if let Some(v) = self.vertex {
            write!(f, ", vertex {v}")?;
        }
        write!(f, ": {}", self.what)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty()
    }
}

fn at(clause: Clause, vertex: VertexId, level: usize, what: &'static str) -> Violation {
    Violation { clause, vertex: Some(vertex), level, what }
}

fn face_of(st: &Stages<'_>, level: usize, f: &Footprint) -> Option<FaceLabel> {
    let p = &st.params;
    let face = f.type_in.face_at(p, level)?;
    (f.type_out.face_at(p, level) == Some(face)).then_some(face)
}

/// Checks on one node that need only its vertex and that vertex's
/// neighbors: edge types, faces, and the rules that produced the node's
/// footprints from its children.
fn check_node(hc: &HistoryCollection, st: &Stages<'_>, v: VertexId, y: &HistoryNode) -> Result<(), Violation> {
    let level = y.level;
    let bad = |what| at(Clause::Stages, v, level, what);
    let me = StageVertex { vertex: v, first: y.first };
    if level == 0 && !y.footprints.is_empty() {
        return Err(bad("footprint on the input graph"));
    }
    for f in &y.footprints {
        let tin = st.edge_type(level, f.pred, me).map_err(bad)?;
        let tout = st.edge_type(level, me, f.succ).map_err(bad)?;
        if tin != Some(f.type_in) || tout != Some(f.type_out) {
            return Err(bad("footprint types disagree with the genealogy"));
        }
        let face = face_of(st, level, f).ok_or_else(|| bad("footprint edges lie on different faces"))?;
        let info = hc.chains.get(&(level, face)).ok_or_else(|| bad("footprint on a face that does not exist"))?;
        if f.counter >= info.len {
            return Err(at(Clause::of_face(face), v, level, "walk position out of range"));
        }
    }
    if level < st.depth {
        let (shapes, consumed) = produce(st, y).map_err(bad)?;
        if !same_shapes(shapes, &y.footprints) {
            return Err(bad("footprints are not what the rules produce"));
        }
        if let Some(c) = consumed.filter(|c| c.rule == RuleKind::CrossCap) {
            let (_, index) = st.step(level + 1).unwrap();
            let len = hc.chains.get(&(level + 1, FaceLabel::Doubled(index))).map_or(0, |i| i.len);
            if !len.is_multiple_of(2) || c.second.counter != (c.first.counter + len / 2) % len.max(1) {
                return Err(at(Clause::CrossCaps, v, level + 1, "doubled copies are not antipodal"));
            }
        }
    }
    Ok(())
}

/// The walk links of one node: each passage has exactly one passage after
/// it and one before it, at the next position.
fn check_links(hc: &HistoryCollection, st: &Stages<'_>, v: VertexId, y: &HistoryNode) -> Result<(), Violation> {
    let level = y.level;
    let me = StageVertex { vertex: v, first: y.first };
    for f in &y.footprints {
        let face = face_of(st, level, f).expect("checked by check_node");
        let info = hc.chains[&(level, face)];
        let bad = |what| at(if level == st.depth { Clause::Leaves } else { Clause::of_face(face) }, v, level, what);
        let next: Vec<&Footprint> = st
            .node(level, f.succ)
            .map(|n| n.footprints.iter().filter(|g| g.pred == me && g.type_in == f.type_out).collect())
            .unwrap_or_default();
        let prev: Vec<&Footprint> = st
            .node(level, f.pred)
            .map(|n| n.footprints.iter().filter(|g| g.succ == me && g.type_out == f.type_in).collect())
            .unwrap_or_default();
        let ([g], [h]) = (next.as_slice(), prev.as_slice()) else {
            return Err(bad("walk link is missing or ambiguous"));
        };
        if g.counter != (f.counter + 1) % info.len || f.counter != (h.counter + 1) % info.len {
            return Err(bad("walk positions do not follow the links"));
        }
        if f.counter == 0 && v != info.root {
            return Err(bad("walk starts away from its root"));
        }
    }
    Ok(())
}

fn check_chain_keys(hc: &HistoryCollection) -> bool {
    let want = HistoryCollection::expected_chains(&hc.params);
    hc.chains.keys().copied().collect::<Vec<ChainKey>>() == want
}

/// The checks one vertex can make from its own history and those of its
/// neighbors, together with the links of its incident edges.
pub fn check_vertex(
    hc: &HistoryCollection,
    st: &Stages<'_>,
    v: VertexId,
    neighbors: &[VertexId],
) -> Result<(), Violation> {
    let bad = |what| at(Clause::Stages, v, 0, what);
    if !hc.params.is_consistent() || !check_chain_keys(hc) {
        return Err(bad("parameters and walks do not match"));
    }
    let root = st.root(v).ok_or_else(|| bad("history is malformed"))?;
    for &w in neighbors {
        if !st.has_vertex(w) {
            return Err(bad("neighbor history is malformed"));
        }
        st.check_edge(Edge::new(v, w)).map_err(bad)?;
    }
    let nbrs: BTreeSet<VertexId> = neighbors.iter().copied().collect();
    for e in hc.links.keys() {
        if (e.0 == v || e.1 == v) && !nbrs.contains(&e.other(v)) {
            return Err(bad("links along a non-edge"));
        }
    }
    for y in root.walk() {
        check_node(hc, st, v, y)?;
        check_links(hc, st, v, y)?;
    }
    for (&(level, face), info) in &hc.chains {
        if info.root != v {
            continue;
        }
        let starts = st
            .nodes_at(v, level)
            .flat_map(|y| y.footprints.iter())
            .filter(|f| f.counter == 0 && face_of(st, level, f) == Some(face))
            .count();
        if starts != 1 {
            return Err(at(Clause::of_face(face), v, level, "walk root does not hold exactly one start"));
        }
    }
    Ok(())
}

/// Assembles one special walk from its footprints, following links from the
/// passage numbered 0.
fn assemble(hc: &HistoryCollection, st: &Stages<'_>, key: ChainKey) -> Result<Vec<StageVertex>, Violation> {
    let (level, face) = key;
    let clause = if level == st.depth { Clause::Leaves } else { Clause::of_face(face) };
    let bad = |what| Violation { clause, vertex: None, level, what };
    let info = hc.chains.get(&key).ok_or_else(|| bad("walk has no root"))?;
    let mut entries: Vec<(StageVertex, Footprint)> = Vec::new();
    for v in st.vertices() {
        for y in st.nodes_at(v, level) {
            for f in &y.footprints {
                if face_of(st, level, f) == Some(face) {
                    entries.push((StageVertex { vertex: v, first: y.first }, *f));
                }
            }
        }
    }
    let mut by_arrival: BTreeMap<(StageVertex, StageVertex, _), Vec<usize>> = BTreeMap::new();
    for (i, (y, f)) in entries.iter().enumerate() {
        by_arrival.entry((*y, f.pred, f.type_in)).or_default().push(i);
    }
    let mut next = vec![usize::MAX; entries.len()];
    let mut indegree = vec![0usize; entries.len()];
    for (i, (y, f)) in entries.iter().enumerate() {
        match by_arrival.get(&(f.succ, *y, f.type_out)).map(Vec::as_slice) {
            Some([j]) => {
                next[i] = *j;
                indegree[*j] += 1;
            }
            _ => return Err(bad("walk link is missing or ambiguous")),
        }
    }
    if indegree.iter().any(|&d| d != 1) {
        return Err(bad("walk link is missing or ambiguous"));
    }
    let starts: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].1.counter == 0).collect();
    let [start] = starts.as_slice() else {
        return Err(bad("walk does not have exactly one start"));
    };
    if entries[*start].0.vertex != info.root {
        return Err(bad("walk starts away from its root"));
    }
    let mut seq = Vec::with_capacity(entries.len());
    let mut i = *start;
    loop {
        if entries[i].1.counter as usize != seq.len() {
            return Err(bad("walk positions do not follow the links"));
        }
        seq.push(entries[i].0);
        i = next[i];
        if i == *start {
            break;
        }
        if seq.len() > entries.len() {
            return Err(bad("walk positions do not follow the links"));
        }
    }
    if seq.len() != entries.len() || seq.len() != info.len as usize {
        return Err(bad("walk falls apart into several pieces"));
    }
    Ok(seq)
}

/// Split vertices of the stage before `level`.
fn split_vertices(st: &Stages<'_>, level: usize) -> BTreeSet<StageVertex> {
    st.vertices()
        .flat_map(|v| {
            st.nodes_at(v, level - 1).filter(|y| y.is_split()).map(move |y| StageVertex { vertex: v, first: y.first })
        })
        .collect()
}

fn check_shapes(st: &Stages<'_>, level: usize, seqs: &BTreeMap<ChainKey, Vec<StageVertex>>) -> Result<(), Violation> {
    let (kind, index) = st.step(level).unwrap();
    let fail = |clause, what| Violation { clause, vertex: None, level, what };
    let par = |x: &StageVertex| st.parent(level, *x);
    let split = split_vertices(st, level);
    let distinct_parents = |xs: &[StageVertex]| -> Option<Vec<StageVertex>> {
        let ps: Option<Vec<StageVertex>> = xs.iter().map(par).collect();
        let ps = ps?;
        let set: BTreeSet<StageVertex> = ps.iter().copied().collect();
        (set.len() == ps.len() && set == split).then_some(ps)
    };
    match kind {
        StepKind::CycleDup => {
            let clause = Clause::Cycles;
            let l = &seqs[&(level, FaceLabel::CycleLeft(index))];
            let r = &seqs[&(level, FaceLabel::CycleRight(index))];
            if l.iter().any(|x| st.copy_side(level, *x) != Some(false)) || distinct_parents(l).is_none() {
                return Err(fail(clause, "left walk is not the primed cycle copy"));
            }
            let back: Option<Vec<StageVertex>> = l.iter().rev().map(|x| st.sibling(level, *x)).collect();
            if !back.is_some_and(|b| cyclic_eq(r, &b)) {
                return Err(fail(clause, "right walk does not run back along the cycle"));
            }
        }
        StepKind::CycleDouble => {
            let clause = Clause::CrossCaps;
            let d = &seqs[&(level, FaceLabel::Doubled(index))];
            let p = split.len();
            if d.len() != 2 * p || p == 0 {
                return Err(fail(clause, "doubled walk has the wrong length"));
            }
            if (0..p).any(|t| st.sibling(level, d[t]) != Some(d[t + p])) || distinct_parents(&d[..p]).is_none() {
                return Err(fail(clause, "doubled walk is not antipodally paired"));
            }
        }
        StepKind::PathDup => {
            let clause = Clause::Paths;
            let m = &seqs[&(level, FaceLabel::Merged(index))];
            let n = m.len();
            let p = split.len();
            let side = |i: usize| st.copy_side(level, m[i % n]);
            let run_start = |s: bool| (0..n).find(|&i| side(i) == Some(s) && side(i + n - 1) != Some(s));
            let (Some(i), Some(j)) = (run_start(false), run_start(true)) else {
                return Err(fail(clause, "merged walk has no path copies"));
            };
            let count = |s: bool| (0..n).filter(|&t| side(t) == Some(s)).count();
            if p == 0
                || count(false) != p
                || count(true) != p
                || (0..p).any(|t| side(i + t) != Some(false) || side(j + t) != Some(true))
            {
                return Err(fail(clause, "path copies are not two runs"));
            }
            let prime: Vec<StageVertex> = (0..p).map(|t| m[(i + t) % n]).collect();
            let dprime: Vec<StageVertex> = (0..p).map(|t| m[(j + p - 1 - t) % n]).collect();
            let object = distinct_parents(&prime).ok_or_else(|| fail(clause, "path copies do not cover the path"))?;
            if dprime.iter().map(par).collect::<Option<Vec<_>>>() != Some(object.clone()) {
                return Err(fail(clause, "path copies are not mirror images"));
            }
            let (chi, psi) = path_faces(&st.params, index);
            let arc = |from: usize, to: usize, head: StageVertex| -> Option<Vec<StageVertex>> {
                let len = (to + n - from) % n;
                std::iter::once(Some(head)).chain((0..len).map(|t| par(&m[(from + t) % n]))).collect()
            };
            let psi_part = arc(i + p, j, object[p - 1]);
            let chi_part = arc(j + p, i, object[0]);
            let above = |f| seqs.get(&(level - 1, f));
            let fits = |part: Option<Vec<StageVertex>>, f| part.zip(above(f)).is_some_and(|(a, b)| cyclic_eq(&a, b));
            if !fits(psi_part, psi) || !fits(chi_part, chi) {
                return Err(fail(clause, "merged walk is not the two faces joined along the path"));
            }
        }
    }
    for face in st.params.labels_at(level - 1) {
        let (Some(below), Some(above)) = (seqs.get(&(level, face)), seqs.get(&(level - 1, face))) else {
            continue;
        };
        let projected: Option<Vec<StageVertex>> = below.iter().map(par).collect();
        if !projected.is_some_and(|p| cyclic_eq(&p, above)) {
            return Err(fail(Clause::of_face(face), "untouched walk changed"));
        }
    }
    Ok(())
}

/// All conditions, over the whole collection.
pub fn check_local_consistency(g: &Graph, hc: &HistoryCollection) -> Report {
    let mut report = Report::default();
    let global = |clause, level, what| Violation { clause, vertex: None, level, what };
    if !hc.params.is_consistent() || !check_chain_keys(hc) {
        report.violations.push(global(Clause::Stages, 0, "parameters and walks do not match"));
        return report;
    }
    let st = Stages::new(hc);
    let have: BTreeSet<VertexId> = hc.histories.keys().copied().collect();
    let want: BTreeSet<VertexId> = g.vertices().collect();
    if have != want {
        report.violations.push(global(Clause::Stages, 0, "histories do not match the vertices"));
        return report;
    }
    for &v in &st.malformed {
        report.violations.push(at(Clause::Stages, v, 0, "history is malformed"));
    }
    let edges: BTreeSet<Edge> = g.edges().into_iter().collect();
    if hc.links.keys().copied().collect::<BTreeSet<_>>() != edges {
        report.violations.push(global(Clause::Stages, 0, "links do not match the edges"));
    }
    if !report.accepted() {
        return report;
    }
    for &e in &edges {
        if let Err(what) = st.check_edge(e) {
            report.violations.push(at(Clause::Stages, e.0, 0, what));
        }
    }
    for v in st.vertices() {
        for y in st.root(v).unwrap().walk() {
            if let Err(x) = check_node(hc, &st, v, y) {
                report.violations.push(x);
                break;
            }
        }
    }
    if !report.accepted() {
        return report;
    }
    let mut seqs: BTreeMap<ChainKey, Vec<StageVertex>> = BTreeMap::new();
    for &key in hc.chains.keys() {
        match assemble(hc, &st, key) {
            Ok(s) => {
                seqs.insert(key, s);
            }
            Err(x) => report.violations.push(x),
        }
    }
    if !report.accepted() {
        return report;
    }
    for level in 1..=st.depth {
        if let Err(x) = check_shapes(&st, level, &seqs) {
            report.violations.push(x);
        }
    }
    let leaves: Vec<Avatar> = match hc.params.final_label() {
        Some(face) if st.depth > 0 => {
            seqs[&(st.depth, face)].iter().map(|x| Avatar { vertex: x.vertex, index: x.first }).collect()
        }
        _ => Vec::new(),
    };
    if !cyclic_eq(&leaves, &hc.walk) {
        report.violations.push(global(Clause::Leaves, st.depth, "leaf footprints do not realize the walk"));
    }
    report
}
