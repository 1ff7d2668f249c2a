//! Histories from an unfolding: the genealogy of every vertex, footprints
//! seeded on the planar graph's special walk and carried upwards by the
//! rules, and walk positions taken from the trace.

use super::index::Stages;
use super::rules::produce;
use super::{Avatar, ChainInfo, Footprint, HistoryCollection, HistoryError, HistoryNode, StageVertex};
use crate::graph::{Edge, VertexId};
use crate::surgery::{FaceLabel, UnfoldingTrace};
use std::collections::BTreeMap;

/// Which history node every stage vertex of a trace is.
#[derive(Clone, Debug)]
pub struct Genealogy {
    pub nodes: Vec<BTreeMap<VertexId, StageVertex>>,
}

impl Genealogy {
    pub fn of(trace: &UnfoldingTrace) -> Genealogy {
        let mut nodes = vec![BTreeMap::new(); trace.depth() + 1];
        for g in trace.stages[0].vertices() {
            grow(trace, g, 0, g, &mut 1, &mut nodes);
        }
        Genealogy { nodes }
    }

    pub fn node(&self, level: usize, x: VertexId) -> Option<StageVertex> {
        self.nodes.get(level)?.get(&x).copied()
    }

    /// Avatar of a vertex of the unfolded graph.
    pub fn avatar(&self, x: VertexId) -> Option<Avatar> {
        let sv = self.nodes.last()?.get(&x)?;
        Some(Avatar { vertex: sv.vertex, index: sv.first })
    }
}

fn grow(
    trace: &UnfoldingTrace,
    g: VertexId,
    level: usize,
    id: VertexId,
    next: &mut u32,
    nodes: &mut [BTreeMap<VertexId, StageVertex>],
) -> HistoryNode {
    let first = *next;
    nodes[level].insert(id, StageVertex { vertex: g, first });
    let depth = trace.depth();
    let mut children = Vec::new();
    if level == depth {
        *next += 1;
    } else {
        let step = &trace.steps[level];
        let kids = match step.object.iter().position(|&x| x == id) {
            Some(t) => vec![step.copies[t].0, step.copies[t].1],
            None => step.splitting.children[&id].clone(),
        };
        for k in kids {
            children.push(grow(trace, g, level + 1, k, next, nodes));
        }
    }
    HistoryNode { level, first, last: *next - 1, footprints: Vec::new(), children }
}

/// Histories, planar-graph links, footprints and walk positions for a trace.
pub fn build_histories(trace: &UnfoldingTrace) -> Result<HistoryCollection, HistoryError> {
    let depth = trace.depth();
    let mut nodes = vec![BTreeMap::new(); depth + 1];
    let mut histories = BTreeMap::new();
    for g in trace.stages[0].vertices() {
        let mut next = 1;
        histories.insert(g, grow(trace, g, 0, g, &mut next, &mut nodes));
    }
    let gen = Genealogy { nodes };
    let mut links: BTreeMap<Edge, Vec<(u32, u32)>> = BTreeMap::new();
    let h = trace.unfolded();
    for (&x, rot) in h.rotations() {
        for &y in rot {
            let (a, b) = (gen.avatar(x).unwrap(), gen.avatar(y).unwrap());
            if a.vertex < b.vertex {
                links.entry(Edge(a.vertex, b.vertex)).or_default().push((a.index, b.index));
            }
        }
    }
    for pairs in links.values_mut() {
        pairs.sort_unstable();
    }
    let mut hc =
        HistoryCollection { params: trace.params, histories, links, chains: BTreeMap::new(), walk: Vec::new() };
    if let Some(w) = trace.special_walk() {
        let walk: Vec<Avatar> = w
            .vertices()
            .iter()
            .map(|&x| gen.avatar(x).ok_or(HistoryError::WalkMismatch(x)))
            .collect::<Result<_, _>>()?;
        seed_leaf_footprints(&mut hc, &walk)?;
    }
    fill_footprints_upward(&mut hc)?;
    let walks: Vec<BTreeMap<FaceLabel, Vec<StageVertex>>> = trace
        .walks
        .iter()
        .enumerate()
        .map(|(level, m)| {
            m.iter().map(|(&l, w)| (l, w.vertices().iter().map(|&x| gen.node(level, x).unwrap()).collect())).collect()
        })
        .collect();
    number_chains(&mut hc, &walks)?;
    Ok(hc)
}

/// Puts one footprint on a leaf per passage of `walk` through it, typed by
/// the genealogy of its edges and numbered by position.
pub fn seed_leaf_footprints(hc: &mut HistoryCollection, walk: &[Avatar]) -> Result<(), HistoryError> {
    let depth = hc.depth();
    let n = walk.len();
    let sv = |a: Avatar| StageVertex { vertex: a.vertex, first: a.index };
    let mut seeded: BTreeMap<StageVertex, Vec<Footprint>> = BTreeMap::new();
    {
        let st = Stages::new(hc);
        for (i, &a) in walk.iter().enumerate() {
            let (p, s) = (walk[(i + n - 1) % n], walk[(i + 1) % n]);
            st.node(depth, sv(a)).ok_or(HistoryError::WalkMismatch(a.vertex))?;
            let ty = |x: Avatar, y: Avatar| {
                st.edge_type(depth, sv(x), sv(y)).ok().flatten().ok_or(HistoryError::NoRuleApplies {
                    vertex: a.vertex,
                    level: depth,
                    what: "walk edge has no type",
                })
            };
            seeded.entry(sv(a)).or_default().push(Footprint {
                pred: sv(p),
                succ: sv(s),
                type_in: ty(p, a)?,
                type_out: ty(a, s)?,
                counter: i as u32,
            });
        }
    }
    for (x, fs) in seeded {
        let root = hc.histories.get_mut(&x.vertex).ok_or(HistoryError::WalkMismatch(x.vertex))?;
        root.walk_mut(&mut |node| {
            if node.level == depth && node.first == x.first {
                node.footprints = fs.clone();
            }
        });
    }
    hc.walk = walk.to_vec();
    Ok(())
}

/// Applies the rules level by level from the leaves up. Produced
/// footprints get counter 0 until [`number_chains`] runs.
pub fn fill_footprints_upward(hc: &mut HistoryCollection) -> Result<(), HistoryError> {
    for level in (0..hc.depth()).rev() {
        let mut made: BTreeMap<StageVertex, Vec<Footprint>> = BTreeMap::new();
        {
            let st = Stages::new(hc);
            for v in st.vertices().collect::<Vec<_>>() {
                for y in st.nodes_at(v, level) {
                    let (shapes, _) =
                        produce(&st, y).map_err(|what| HistoryError::NoRuleApplies { vertex: v, level, what })?;
                    let fs = shapes
                        .into_iter()
                        .map(|(pred, succ, type_in, type_out)| Footprint { pred, succ, type_in, type_out, counter: 0 })
                        .collect();
                    made.insert(StageVertex { vertex: v, first: y.first }, fs);
                }
            }
        }
        for (x, fs) in made {
            hc.histories.get_mut(&x.vertex).unwrap().walk_mut(&mut |node| {
                if node.level == level && node.first == x.first {
                    node.footprints = fs.clone();
                }
            });
        }
    }
    Ok(())
}

/// Numbers footprints by their position along the given walks (per level,
/// vertex sequences by face) and records where each walk starts.
pub fn number_chains(
    hc: &mut HistoryCollection,
    walks: &[BTreeMap<FaceLabel, Vec<StageVertex>>],
) -> Result<(), HistoryError> {
    let params = hc.params;
    let mut positions: BTreeMap<(usize, StageVertex, StageVertex, StageVertex, FaceLabel), u32> = BTreeMap::new();
    let mut chains = BTreeMap::new();
    for (level, m) in walks.iter().enumerate() {
        for (&face, seq) in m {
            let n = seq.len();
            for i in 0..n {
                let key = (level, seq[(i + n - 1) % n], seq[i], seq[(i + 1) % n], face);
                if positions.insert(key, i as u32).is_some() {
                    return Err(HistoryError::ChainMismatch { level, face });
                }
            }
            if let Some(first) = seq.first() {
                chains.insert((level, face), ChainInfo { root: first.vertex, len: n as u32 });
            }
        }
    }
    let total = positions.len();
    let mut used = 0;
    let mut missing = None;
    for (&v, root) in hc.histories.iter_mut() {
        root.walk_mut(&mut |node| {
            let me = StageVertex { vertex: v, first: node.first };
            for f in &mut node.footprints {
                let Some(face) = f.type_in.face_at(&params, node.level) else {
                    missing.get_or_insert((node.level, FaceLabel::Merged(0)));
                    continue;
                };
                match positions.get(&(node.level, f.pred, me, f.succ, face)) {
                    Some(&i) => {
                        f.counter = i;
                        used += 1;
                    }
                    None => {
                        missing.get_or_insert((node.level, face));
                    }
                }
            }
        });
    }
    if let Some((level, face)) = missing {
        return Err(HistoryError::ChainMismatch { level, face });
    }
    if used != total {
        return Err(HistoryError::ChainMismatch { level: 0, face: FaceLabel::Merged(0) });
    }
    hc.chains = chains;
    Ok(())
}
