//! Structural tampering with a history collection, for soundness tests.

use super::{EdgeType, Footprint, HistoryCollection, HistoryNode};
use crate::graph::VertexId;
use crate::surgery::FaceLabel;
use rand::seq::SliceRandom;
use rand::Rng;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tamper {
    Counter,
    SwapEnds,
    Retype,
    DropFootprint,
    CopyFootprint,
    MoveFootprint,
    ChainRoot,
    ChainLength,
    /// Runs one special walk backwards at one level.
    ReverseWalk,
    RelinkAvatar,
}

impl Tamper {
    pub const ALL: [Tamper; 10] = [
        Tamper::Counter,
        Tamper::SwapEnds,
        Tamper::Retype,
        Tamper::DropFootprint,
        Tamper::CopyFootprint,
        Tamper::MoveFootprint,
        Tamper::ChainRoot,
        Tamper::ChainLength,
        Tamper::ReverseWalk,
        Tamper::RelinkAvatar,
    ];
}

impl fmt::Display for Tamper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Every node as (vertex, child path from the root).
fn node_paths(hc: &HistoryCollection) -> Vec<(VertexId, Vec<usize>)> {
    fn go(v: VertexId, x: &HistoryNode, path: &mut Vec<usize>, out: &mut Vec<(VertexId, Vec<usize>)>) {
        out.push((v, path.clone()));
        for (i, c) in x.children.iter().enumerate() {
            path.push(i);
            go(v, c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for (&v, root) in &hc.histories {
        go(v, root, &mut Vec::new(), &mut out);
    }
    out
}

fn node_mut<'a>(hc: &'a mut HistoryCollection, v: VertexId, path: &[usize]) -> &'a mut HistoryNode {
    let mut x = hc.histories.get_mut(&v).unwrap();
    for &i in path {
        x = &mut x.children[i];
    }
    x
}

fn node<'a>(hc: &'a HistoryCollection, v: VertexId, path: &[usize]) -> &'a HistoryNode {
    path.iter().fold(&hc.histories[&v], |x, &i| &x.children[i])
}

fn random_footprint<'a, R: Rng>(hc: &'a mut HistoryCollection, rng: &mut R) -> Option<&'a mut Footprint> {
    let mut all: Vec<&mut Footprint> = Vec::new();
    let mut stack: Vec<&mut HistoryNode> = hc.histories.values_mut().collect();
    while let Some(x) = stack.pop() {
        all.extend(x.footprints.iter_mut());
        stack.extend(x.children.iter_mut());
    }
    if all.is_empty() {
        return None;
    }
    let i = rng.gen_range(0..all.len());
    Some(all.swap_remove(i))
}

fn random_type<R: Rng>(hc: &HistoryCollection, rng: &mut R) -> EdgeType {
    let k = hc.params.genus.max(1) + hc.params.doublings;
    let i = rng.gen_range(1..=k.max(1));
    match rng.gen_range(0..5) {
        0 => EdgeType::CycleLeft(i),
        1 => EdgeType::CycleRight(i),
        2 => EdgeType::PathLeft(i),
        3 => EdgeType::PathRight(i),
        _ => EdgeType::Doubled(i),
    }
}

/// Applies one tampering of the given kind. Returns `false` when the
/// collection has nothing it applies to.
pub fn tamper<R: Rng>(hc: &mut HistoryCollection, kind: Tamper, rng: &mut R) -> bool {
    let vertices: Vec<VertexId> = hc.histories.keys().copied().collect();
    match kind {
        Tamper::Counter => {
            let bump = rng.gen_range(1..4);
            let Some(f) = random_footprint(hc, rng) else { return false };
            f.counter += bump;
        }
        Tamper::SwapEnds => {
            let Some(f) = random_footprint(hc, rng) else { return false };
            std::mem::swap(&mut f.pred, &mut f.succ);
        }
        Tamper::Retype => {
            let t = random_type(hc, rng);
            let inwards = rng.gen_bool(0.5);
            let Some(f) = random_footprint(hc, rng) else { return false };
            if inwards {
                f.type_in = t;
            } else {
                f.type_out = t;
            }
        }
        Tamper::DropFootprint | Tamper::CopyFootprint | Tamper::MoveFootprint => {
            let paths = node_paths(hc);
            let full: Vec<_> = paths.iter().filter(|(v, p)| !node(hc, *v, p).footprints.is_empty()).collect();
            let Some((v, path)) = full.choose(rng).map(|x| (x.0, x.1.clone())) else { return false };
            let x = node_mut(hc, v, &path);
            let (level, j) = (x.level, rng.gen_range(0..x.footprints.len()));
            match kind {
                Tamper::DropFootprint => {
                    x.footprints.remove(j);
                }
                Tamper::CopyFootprint => {
                    let f = x.footprints[j];
                    x.footprints.push(f);
                }
                _ => {
                    let f = x.footprints.remove(j);
                    let same: Vec<_> = paths.iter().filter(|(w, p)| node(hc, *w, p).level == level).collect();
                    let (w, p) = same.choose(rng).unwrap();
                    node_mut(hc, *w, p).footprints.push(f);
                }
            }
        }
        Tamper::ChainRoot => {
            let Some(&key) = hc.chains.keys().collect::<Vec<_>>().choose(rng).copied() else { return false };
            let v = *vertices.choose(rng).unwrap();
            hc.chains.get_mut(&key).unwrap().root = v;
        }
        Tamper::ChainLength => {
            let Some(&key) = hc.chains.keys().collect::<Vec<_>>().choose(rng).copied() else { return false };
            let c = hc.chains.get_mut(&key).unwrap();
            c.len = if rng.gen_bool(0.5) { c.len + 1 } else { c.len.saturating_sub(1) };
        }
        Tamper::ReverseWalk => {
            let Some(&(level, face)) = hc.chains.keys().collect::<Vec<_>>().choose(rng).copied() else { return false };
            reverse_walk(hc, level, face);
        }
        Tamper::RelinkAvatar => {
            let edges: Vec<_> = hc.links.keys().copied().collect();
            let Some(&e) = edges.choose(rng) else { return false };
            let last = hc.histories[&e.0].last;
            let pairs = hc.links.get_mut(&e).unwrap();
            let i = rng.gen_range(0..pairs.len());
            pairs[i].0 = rng.gen_range(1..=last);
        }
    }
    true
}

/// Reverses the walk of `face` at `level`: every passage swaps its ends and
/// types, and positions count down from the same start.
pub fn reverse_walk(hc: &mut HistoryCollection, level: usize, face: FaceLabel) {
    let params = hc.params;
    let Some(len) = hc.chains.get(&(level, face)).map(|c| c.len) else { return };
    for (v, path) in node_paths(hc) {
        let x = node_mut(hc, v, &path);
        if x.level != level {
            continue;
        }
        for f in &mut x.footprints {
            if f.type_in.face_at(&params, level) == Some(face) {
                *f = Footprint {
                    pred: f.succ,
                    succ: f.pred,
                    type_in: f.type_out,
                    type_out: f.type_in,
                    counter: (len - f.counter) % len,
                };
            }
        }
    }
    if level == hc.depth() && !hc.walk.is_empty() {
        hc.walk.reverse();
        hc.walk.rotate_right(1);
    }
}
