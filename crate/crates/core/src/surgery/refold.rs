//! Folding an unfolding back up, checking at every stage that the recorded
//! walks, splittings and cut objects glue into the claimed surface.
//!
//! Only the unfolded graph, the per-step objects, copies and splittings, and
//! the vertex sequences of the special walks are read, so a trace rebuilt
//! from certificates can be checked the same way as one fresh from `unfold`.

use super::pipeline::{path_faces, FaceLabel, StepKind, SurgeryStep, UnfoldingTrace};
use super::SurgeryError;
use crate::embedding::{cyclic_eq, DirCorner, EmbeddingScheme, Sign, SurfaceKind};
use crate::graph::{Edge, VertexId};
use std::collections::{BTreeMap, BTreeSet};

/// Which global consistency check failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Step kinds, counts or face labels disagree with the parameters.
    Schedule,
    /// A recorded walk is not a face of the reconstructed stage.
    Walks,
    /// An untouched special face changed between stages.
    Vacancy,
    CycleDuplication,
    PathDuplication,
    CycleDoubling,
    /// Split vertices do not glue back into a simple rotation system.
    Gluing,
    /// The unfolded graph is not a planar, orientable embedding.
    Planarity,
    /// The refolded embedding has the wrong genus.
    FinalGenus,
}

fn fail(condition: Condition, stage: usize) -> SurgeryError {
    SurgeryError::GlobalInconsistency { condition, stage }
}

fn step_condition(kind: StepKind) -> Condition {
    match kind {
        StepKind::CycleDup => Condition::CycleDuplication,
        StepKind::PathDup => Condition::PathDuplication,
        StepKind::CycleDouble => Condition::CycleDoubling,
    }
}

type Seqs = BTreeMap<FaceLabel, Vec<VertexId>>;

/// Rebuilds the input embedding from a trace, or reports the first global
/// consistency condition it violates.
pub fn refold(trace: &UnfoldingTrace) -> Result<EmbeddingScheme, SurgeryError> {
    let params = trace.params;
    let depth = trace.steps.len();
    if !params.is_consistent() || depth != params.depth() || trace.walks.len() != depth + 1 {
        return Err(fail(Condition::Schedule, 0));
    }
    let schedule = params.schedule();
    for (i, step) in trace.steps.iter().enumerate() {
        if (step.kind, step.index) != schedule[i] {
            return Err(fail(Condition::Schedule, i + 1));
        }
    }
    let seqs: Vec<Seqs> = trace.walks.iter().map(|m| m.iter().map(|(&l, w)| (l, w.vertices())).collect()).collect();
    for (stage, s) in seqs.iter().enumerate() {
        let have: Vec<FaceLabel> = s.keys().copied().collect();
        if have != params.labels_at(stage) {
            return Err(fail(Condition::Schedule, stage));
        }
    }

    // Shapes of the created faces.
    for (i, step) in trace.steps.iter().enumerate() {
        let level = i + 1;
        check_splitting(step, level)?;
        let first: Vec<VertexId> = step.copies.iter().map(|c| c.0).collect();
        let second: Vec<VertexId> = step.copies.iter().map(|c| c.1).collect();
        match step.kind {
            StepKind::CycleDup => {
                let mut back = second.clone();
                back[1..].reverse();
                let l = &seqs[level][&FaceLabel::CycleLeft(step.index)];
                let r = &seqs[level][&FaceLabel::CycleRight(step.index)];
                if !cyclic_eq(l, &first) || !cyclic_eq(r, &back) {
                    return Err(fail(Condition::CycleDuplication, level));
                }
            }
            StepKind::CycleDouble => {
                let both: Vec<VertexId> = first.iter().chain(&second).copied().collect();
                if !cyclic_eq(&seqs[level][&FaceLabel::Doubled(step.index)], &both) {
                    return Err(fail(Condition::CycleDoubling, level));
                }
            }
            StepKind::PathDup => {}
        }
    }

    // Merged faces against the faces they came from, and untouched faces.
    let mut runs: Vec<Option<(usize, usize)>> = vec![None; depth];
    for (i, step) in trace.steps.iter().enumerate() {
        let level = i + 1;
        let par = &step.splitting.parent;
        let project = |w: &[VertexId]| -> Option<Vec<VertexId>> { w.iter().map(|v| par.get(v).copied()).collect() };
        for (l, above) in &seqs[level - 1] {
            if let Some(below) = seqs[level].get(l) {
                if !project(below).is_some_and(|p| cyclic_eq(&p, above)) {
                    return Err(fail(Condition::Vacancy, level));
                }
            }
        }
        if step.kind == StepKind::PathDup {
            let (chi, psi) = path_faces(&params, step.index);
            let merged = &seqs[level][&FaceLabel::Merged(step.index)];
            let found = find_runs(step, merged, &seqs[level - 1][&chi], &seqs[level - 1][&psi]);
            runs[i] = Some(found.ok_or_else(|| fail(Condition::PathDuplication, level))?);
        }
    }

    // Geometric descent.
    let mut u = trace.unfolded().clone();
    if !u.is_all_positive() || u.euler_genus().ok() != Some(SurfaceKind::sphere()) {
        return Err(fail(Condition::Planarity, depth));
    }
    for level in (1..=depth).rev() {
        let step = &trace.steps[level - 1];
        let orientable_stage = level as u32 >= params.doublings;
        let corners = resolve_walks(&u, &seqs[level], orientable_stage).ok_or_else(|| fail(Condition::Walks, level))?;
        let p = step.copies.len();
        let mut pick: BTreeMap<VertexId, DirCorner> = BTreeMap::new();
        let mut collapses = vec![2usize; p];
        match step.kind {
            StepKind::CycleDup => {
                let l = &corners[&FaceLabel::CycleLeft(step.index)];
                let r = &corners[&FaceLabel::CycleRight(step.index)];
                for c in l.iter().chain(r) {
                    pick.insert(c.vertex, *c);
                }
            }
            StepKind::CycleDouble => {
                for c in &corners[&FaceLabel::Doubled(step.index)] {
                    pick.insert(c.vertex, *c);
                }
            }
            StepKind::PathDup => {
                let (i, j) = runs[level - 1].expect("runs found above");
                let m = &corners[&FaceLabel::Merged(step.index)];
                let n = m.len();
                for t in 0..p {
                    pick.insert(step.copies[t].0, m[(i + t) % n]);
                    pick.insert(step.copies[t].1, m[(j + p - 1 - t) % n]);
                }
                if p == 1 {
                    collapses[0] = 0;
                } else {
                    collapses[0] = 1;
                    collapses[p - 1] = 1;
                }
            }
        }
        let allow_reverse = step.kind == StepKind::CycleDouble;
        let before = u.euler_characteristic().map_err(|_| fail(Condition::Gluing, level))?;
        u = glue(&u, step, &pick, &collapses, allow_reverse).ok_or_else(|| fail(Condition::Gluing, level))?;
        let after = u.euler_characteristic().map_err(|_| fail(Condition::Gluing, level))?;
        let drop = match step.kind {
            StepKind::CycleDup => 2,
            StepKind::CycleDouble => 1,
            StepKind::PathDup => 0,
        };
        if before - after != drop {
            return Err(fail(step_condition(step.kind), level));
        }
    }
    let orientable_top = params.doublings == 0;
    if resolve_walks(&u, &seqs[0], orientable_top).is_none() {
        return Err(fail(Condition::Walks, 0));
    }
    if u.euler_genus().ok() != Some(params.surface()) {
        return Err(fail(Condition::FinalGenus, 0));
    }
    Ok(u)
}

/// Object vertices split into exactly their two copies; every other vertex
/// has a single child.
fn check_splitting(step: &SurgeryStep, level: usize) -> Result<(), SurgeryError> {
    let bad = || fail(step_condition(step.kind), level);
    let closed = step.kind != StepKind::PathDup;
    let p = step.object.len();
    if p == 0 || step.copies.len() != p || (closed && p < 3) {
        return Err(bad());
    }
    let objects: BTreeSet<VertexId> = step.object.iter().copied().collect();
    if objects.len() != p {
        return Err(bad());
    }
    for (&x, &(a, b)) in step.object.iter().zip(&step.copies) {
        let mut want = vec![a, b];
        want.sort_unstable();
        let mut have = step.splitting.children.get(&x).cloned().unwrap_or_default();
        have.sort_unstable();
        if a == b || have != want {
            return Err(bad());
        }
    }
    for (x, cs) in &step.splitting.children {
        if !objects.contains(x) && cs.len() != 1 {
            return Err(bad());
        }
        if cs.iter().any(|c| step.splitting.parent.get(c) != Some(x)) {
            return Err(bad());
        }
    }
    Ok(())
}

/// Positions of the primed run (first copy to last) and the double-primed
/// run (last copy back to first) in the merged walk, such that what lies
/// between them projects onto the two faces that were merged.
fn find_runs(step: &SurgeryStep, merged: &[VertexId], chi: &[VertexId], psi: &[VertexId]) -> Option<(usize, usize)> {
    let n = merged.len();
    let r = step.copies.len();
    if 2 * r > n {
        return None;
    }
    let prime: Vec<VertexId> = step.copies.iter().map(|c| c.0).collect();
    let dprime: Vec<VertexId> = step.copies.iter().rev().map(|c| c.1).collect();
    let at = |i: usize| merged[i % n];
    let run_at = |i: usize, run: &[VertexId]| run.iter().enumerate().all(|(t, &v)| at(i + t) == v);
    let par = &step.splitting.parent;
    let project = |from: usize, len: usize, head: VertexId| -> Option<Vec<VertexId>> {
        let mut out = vec![head];
        for t in 0..len {
            out.push(*par.get(&at(from + t))?);
        }
        Some(out)
    };
    let (w0, ws) = (step.object[0], step.object[r - 1]);
    for i in (0..n).filter(|&i| run_at(i, &prime)) {
        for j in (0..n).filter(|&j| run_at(j, &dprime)) {
            let d = (j + n - i) % n;
            if d < r || d + r > n {
                continue;
            }
            let psi_part = project(i + r, d - r, ws);
            let chi_part = project(j + r, n - d - r, w0);
            if psi_part.is_some_and(|x| cyclic_eq(&x, psi)) && chi_part.is_some_and(|x| cyclic_eq(&x, chi)) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Corners of each walk, found by tracing from its first two vertices.
/// Distinct walks must be distinct faces.
fn resolve_walks(u: &EmbeddingScheme, seqs: &Seqs, plus_only: bool) -> Option<BTreeMap<FaceLabel, Vec<DirCorner>>> {
    let mut out = BTreeMap::new();
    let mut used = BTreeSet::new();
    for (&l, w) in seqs {
        let corners = resolve(u, w, plus_only)?;
        for c in &corners {
            if !used.insert(c.gap()) {
                return None;
            }
        }
        out.insert(l, corners);
    }
    Some(out)
}

fn resolve(u: &EmbeddingScheme, w: &[VertexId], plus_only: bool) -> Option<Vec<DirCorner>> {
    let n = w.len();
    if n < 2 || w.iter().any(|&v| !u.has_vertex(v)) {
        return None;
    }
    let (v, from, to) = (w[0], w[n - 1], w[1]);
    u.position(v, from)?;
    u.position(v, to)?;
    let flags: &[Sign] = if plus_only { &[1] } else { &[1, -1] };
    for &flag in flags {
        let fits = if flag > 0 { u.succ(v, from) == to } else { u.succ(v, to) == from };
        if !fits {
            continue;
        }
        let start = DirCorner { vertex: v, from, to, flag };
        if let Ok(walk) = u.trace_from(start) {
            if walk.vertices() == w {
                return Some(walk.corners);
            }
        }
    }
    None
}

/// Neighbors of `c.vertex` from the one the walk leaves towards, around to
/// the one it came from, in the direction the walk turns.
fn turn_sequence(u: &EmbeddingScheme, c: DirCorner) -> Vec<VertexId> {
    let (start, stop) = if c.flag > 0 { (c.to, c.from) } else { (c.from, c.to) };
    let mut out = vec![start];
    let mut x = start;
    while x != stop {
        x = u.succ(c.vertex, x);
        out.push(x);
    }
    out
}

/// Concatenates two projected sequences, merging the neighbor shared at each
/// junction, and requires exactly `collapses` such merges.
fn merge(a: &[VertexId], b: &[VertexId], collapses: usize) -> Option<Vec<VertexId>> {
    let j1 = a.last() == b.first();
    let j2 = b.last() == a.first();
    if usize::from(j1) + usize::from(j2) != collapses {
        return None;
    }
    let mut out = a.to_vec();
    out.extend_from_slice(&b[usize::from(j1)..]);
    if j2 {
        out.pop();
    }
    let set: BTreeSet<_> = out.iter().collect();
    (set.len() == out.len() && !out.is_empty()).then_some(out)
}

fn glue(
    u: &EmbeddingScheme,
    step: &SurgeryStep,
    pick: &BTreeMap<VertexId, DirCorner>,
    collapses: &[usize],
    allow_reverse: bool,
) -> Option<EmbeddingScheme> {
    let par = &step.splitting.parent;
    if par.len() != u.n() || u.vertices().any(|v| !par.contains_key(&v)) {
        return None;
    }
    let project = |s: Vec<VertexId>| -> Vec<VertexId> { s.into_iter().map(|x| par[&x]).collect() };
    let mut reversed: BTreeSet<VertexId> = BTreeSet::new();
    let mut rotation: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let index: BTreeMap<VertexId, usize> = step.object.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    for (&x, cs) in &step.splitting.children {
        let r = if let Some(&t) = index.get(&x) {
            let (y1, y2) = step.copies[t];
            let (c1, c2) = (pick.get(&y1)?, pick.get(&y2)?);
            if c1.vertex != y1 || c2.vertex != y2 {
                return None;
            }
            let s1 = project(turn_sequence(u, *c1));
            let mut s2 = project(turn_sequence(u, *c2));
            match merge(&s1, &s2, collapses[t]) {
                Some(r) => r,
                None if allow_reverse => {
                    s2.reverse();
                    reversed.insert(y2);
                    merge(&s1, &s2, collapses[t])?
                }
                None => return None,
            }
        } else {
            project(u.rotation(cs[0]).to_vec())
        };
        if r.len() != r.iter().collect::<BTreeSet<_>>().len() || r.contains(&x) {
            return None;
        }
        rotation.insert(x, r);
    }
    let mut signs: BTreeMap<Edge, Sign> = BTreeMap::new();
    for (&a, rot) in u.rotations() {
        for &b in rot {
            if a > b {
                continue;
            }
            let flip = |v: VertexId| if reversed.contains(&v) { -1 } else { 1 };
            let sign = u.sign(a, b) * flip(a) * flip(b);
            let e = Edge::new(par[&a], par[&b]);
            if *signs.entry(e).or_insert(sign) != sign {
                return None;
            }
        }
    }
    let negative = signs.into_iter().filter(|&(_, s)| s < 0).map(|(e, _)| e).collect();
    EmbeddingScheme::new(rotation, negative).ok()
}
