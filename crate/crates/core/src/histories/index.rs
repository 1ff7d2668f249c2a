//! Lookups over a (possibly partial) history collection: nodes by level,
//! ancestors, the stage graphs rebuilt from planar-graph edges, and the
//! structural type of every stage edge.

use super::{EdgeType, HistoryCollection, HistoryNode, StageVertex};
use crate::graph::{Edge, VertexId};
use crate::surgery::{Params, StepKind};
use std::collections::{BTreeMap, BTreeSet};

struct VertexIndex<'a> {
    root: &'a HistoryNode,
    /// Per level, nodes keyed by their first avatar.
    levels: Vec<BTreeMap<u32, &'a HistoryNode>>,
}

/// Per level, the stage edges projecting onto one edge of G, as pairs of
/// first avatars oriented like the edge.
pub type EdgeImages = Vec<BTreeSet<(u32, u32)>>;

pub struct Stages<'a> {
    pub params: Params,
    pub depth: usize,
    schedule: Vec<(StepKind, u32)>,
    vertices: BTreeMap<VertexId, VertexIndex<'a>>,
    images: BTreeMap<Edge, EdgeImages>,
    /// Vertices whose history has the wrong shape.
    pub malformed: BTreeSet<VertexId>,
    /// Edges whose links name avatars that do not exist.
    pub dangling: BTreeSet<Edge>,
}

/// Checks that a history is a tree of the given depth whose nodes' avatar
/// ranges are split between their children.
pub fn well_formed(root: &HistoryNode, depth: usize) -> bool {
    fn go(x: &HistoryNode, level: usize, depth: usize) -> bool {
        if x.level != level || x.first > x.last || x.children.len() > 2 {
            return false;
        }
        if x.children.is_empty() {
            return level == depth && x.first == x.last;
        }
        if level >= depth {
            return false;
        }
        let mut next = x.first;
        for c in &x.children {
            if c.first != next || !go(c, level + 1, depth) {
                return false;
            }
            next = c.last + 1;
        }
        next == x.last + 1
    }
    root.first == 1 && go(root, 0, depth)
}

impl<'a> Stages<'a> {
    pub fn new(hc: &'a HistoryCollection) -> Stages<'a> {
        let depth = hc.params.depth();
        let mut vertices = BTreeMap::new();
        let mut malformed = BTreeSet::new();
        for (&v, root) in &hc.histories {
            if !well_formed(root, depth) {
                malformed.insert(v);
                continue;
            }
            let mut levels = vec![BTreeMap::new(); depth + 1];
            for x in root.walk() {
                levels[x.level].insert(x.first, x);
            }
            vertices.insert(v, VertexIndex { root, levels });
        }
        let mut st = Stages {
            params: hc.params,
            depth,
            schedule: hc.params.schedule(),
            vertices,
            images: BTreeMap::new(),
            malformed,
            dangling: BTreeSet::new(),
        };
        for (&e, pairs) in &hc.links {
            match st.project(e, pairs) {
                Some(img) => {
                    st.images.insert(e, img);
                }
                None => {
                    st.dangling.insert(e);
                }
            }
        }
        st
    }

    fn project(&self, e: Edge, pairs: &[(u32, u32)]) -> Option<EdgeImages> {
        let (a, b) = (self.vertices.get(&e.0)?, self.vertices.get(&e.1)?);
        let mut out: EdgeImages = vec![BTreeSet::new(); self.depth + 1];
        for &(x, y) in pairs {
            if x < 1 || x > a.root.last || y < 1 || y > b.root.last {
                return None;
            }
            for (level, set) in out.iter_mut().enumerate() {
                set.insert((anc(a, level, x)?, anc(b, level, y)?));
            }
        }
        Some(out)
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn root(&self, v: VertexId) -> Option<&'a HistoryNode> {
        self.vertices.get(&v).map(|i| i.root)
    }

    /// The step run at `level` (1-based).
    pub fn step(&self, level: usize) -> Option<(StepKind, u32)> {
        level.checked_sub(1).and_then(|i| self.schedule.get(i)).copied()
    }

    pub fn node(&self, level: usize, x: StageVertex) -> Option<&'a HistoryNode> {
        self.vertices.get(&x.vertex)?.levels.get(level)?.get(&x.first).copied()
    }

    pub fn nodes_at(&self, v: VertexId, level: usize) -> impl Iterator<Item = &'a HistoryNode> + '_ {
        self.vertices.get(&v).and_then(|i| i.levels.get(level)).into_iter().flat_map(|m| m.values().copied())
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    /// The level `level - 1` node above `x`.
    pub fn parent(&self, level: usize, x: StageVertex) -> Option<StageVertex> {
        let idx = self.vertices.get(&x.vertex)?;
        idx.levels.get(level)?.get(&x.first)?;
        let first = anc(idx, level.checked_sub(1)?, x.first)?;
        Some(StageVertex { vertex: x.vertex, first })
    }

    /// Whether `x` is the primed (`Some(false)`) or double-primed
    /// (`Some(true)`) copy of a vertex split at step `level`.
    pub fn copy_side(&self, level: usize, x: StageVertex) -> Option<bool> {
        let p = self.parent(level, x)?;
        let node = self.node(level - 1, p)?;
        node.is_split().then_some(x.first != p.first)
    }

    pub fn sibling(&self, level: usize, x: StageVertex) -> Option<StageVertex> {
        let p = self.parent(level, x)?;
        let node = self.node(level - 1, p)?;
        if !node.is_split() {
            return None;
        }
        let other = node.children.iter().find(|c| c.first != x.first)?;
        Some(StageVertex { vertex: x.vertex, first: other.first })
    }

    pub fn images(&self, e: Edge) -> Option<&EdgeImages> {
        self.images.get(&e)
    }

    /// The stage-`level` neighbors of `x`.
    pub fn neighborhood(&self, level: usize, x: StageVertex) -> Vec<StageVertex> {
        let mut out = BTreeSet::new();
        for (e, img) in &self.images {
            if e.0 != x.vertex && e.1 != x.vertex {
                continue;
            }
            for &(a, b) in &img[level] {
                if e.0 == x.vertex && a == x.first {
                    out.insert(StageVertex { vertex: e.1, first: b });
                } else if e.1 == x.vertex && b == x.first {
                    out.insert(StageVertex { vertex: e.0, first: a });
                }
            }
        }
        out.into_iter().collect()
    }

    fn oriented(x: StageVertex, y: StageVertex) -> (Edge, (u32, u32)) {
        let e = Edge::new(x.vertex, y.vertex);
        if x.vertex == e.0 {
            (e, (x.first, y.first))
        } else {
            (e, (y.first, x.first))
        }
    }

    pub fn adjacent(&self, level: usize, x: StageVertex, y: StageVertex) -> bool {
        if x.vertex == y.vertex {
            return false;
        }
        let (e, pair) = Self::oriented(x, y);
        self.images.get(&e).and_then(|img| img.get(level)).is_some_and(|s| s.contains(&pair))
    }

    /// The type of stage edge `xy` at `level`: the latest step that
    /// duplicated one of its ancestors, with the copy it lies on. `Ok(None)`
    /// for edges never duplicated.
    pub fn edge_type(&self, level: usize, x: StageVertex, y: StageVertex) -> Result<Option<EdgeType>, &'static str> {
        if !self.adjacent(level, x, y) {
            return Err("footprint neighbor is not adjacent");
        }
        let (e, (mut a, mut b)) = Self::oriented(x, y);
        let img = &self.images[&e];
        let (va, vb) = (&self.vertices[&e.0], &self.vertices[&e.1]);
        for s in (1..=level).rev() {
            let pa = anc(va, s - 1, a).ok_or("missing ancestor")?;
            let pb = anc(vb, s - 1, b).ok_or("missing ancestor")?;
            let count =
                img[s].iter().filter(|&&(c, d)| anc(va, s - 1, c) == Some(pa) && anc(vb, s - 1, d) == Some(pb)).count();
            match count {
                1 => {}
                2 => {
                    let (kind, index) = self.schedule[s - 1];
                    let side_a = va.levels[s - 1][&pa].is_split().then_some(a != pa);
                    let side_b = vb.levels[s - 1][&pb].is_split().then_some(b != pb);
                    let (Some(sa), Some(sb)) = (side_a, side_b) else {
                        return Err("duplicated edge at an unsplit vertex");
                    };
                    if kind != StepKind::CycleDouble && sa != sb {
                        return Err("duplicated edge joins opposite copies");
                    }
                    return Ok(Some(EdgeType::of_copy(kind, index, sa)));
                }
                _ => return Err("edge has more than two images"),
            }
            a = pa;
            b = pb;
        }
        Ok(None)
    }

    /// Stage-graph sanity for one edge of G: at every step, the images of a
    /// parent edge form a matching of size one, or of size two between split
    /// endpoints.
    pub fn check_edge(&self, e: Edge) -> Result<(), &'static str> {
        let img = self.images.get(&e).ok_or("edge has no images")?;
        if img.first().is_none_or(|s| s.is_empty()) {
            return Err("edge has no images");
        }
        let (va, vb) = (&self.vertices[&e.0], &self.vertices[&e.1]);
        for s in 1..=self.depth {
            let mut groups: BTreeMap<(u32, u32), Vec<(u32, u32)>> = BTreeMap::new();
            for &(c, d) in &img[s] {
                let key = (anc(va, s - 1, c).ok_or("missing ancestor")?, anc(vb, s - 1, d).ok_or("missing ancestor")?);
                groups.entry(key).or_default().push((c, d));
            }
            for ((pa, pb), kids) in groups {
                match kids.as_slice() {
                    [_] => {}
                    [(c1, d1), (c2, d2)] => {
                        let split = va.levels[s - 1][&pa].is_split() && vb.levels[s - 1][&pb].is_split();
                        if !split || c1 == c2 || d1 == d2 {
                            return Err("edge images are not a matching");
                        }
                    }
                    _ => return Err("edge has more than two images"),
                }
            }
        }
        Ok(())
    }
}

fn anc(idx: &VertexIndex<'_>, level: usize, avatar: u32) -> Option<u32> {
    let (&first, node) = idx.levels.get(level)?.range(..=avatar).next_back()?;
    (avatar <= node.last).then_some(first)
}
