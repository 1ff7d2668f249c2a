//! Signed rotation systems, face tracing and the Euler-formula genus.

use crate::graph::{Edge, Graph, GraphError, VertexId};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

pub type Sign = i8;

/// Half of an edge, leaving `origin`. Graphs are simple, so the far endpoint
/// names the edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub origin: VertexId,
    pub target: VertexId,
}

impl Dart {
    pub fn new(origin: VertexId, target: VertexId) -> Dart {
        Dart { origin, target }
    }

    pub fn edge(&self) -> Edge {
        Edge::new(self.origin, self.target)
    }

    /// 0 for the dart leaving the smaller endpoint.
    pub fn side(&self) -> u8 {
        u8::from(self.origin > self.target)
    }

    pub fn reverse(&self) -> Dart {
        Dart::new(self.target, self.origin)
    }
}

/// One passage of a face walk through a vertex: arriving from `from`,
/// leaving towards `to`. `flag` is the accumulated signature product, so the
/// gap being crossed is the one right after `from` in the rotation when
/// `flag > 0` and right after `to` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirCorner {
    pub vertex: VertexId,
    pub from: VertexId,
    pub to: VertexId,
    pub flag: Sign,
}

impl DirCorner {
    /// The rotation gap as (vertex, neighbor it follows).
    pub fn gap(&self) -> (VertexId, VertexId) {
        if self.flag > 0 {
            (self.vertex, self.from)
        } else {
            (self.vertex, self.to)
        }
    }

    pub fn reversed(&self) -> DirCorner {
        DirCorner { vertex: self.vertex, from: self.to, to: self.from, flag: -self.flag }
    }
}

/// A closed face walk. Entry `i` is the passage through the `i`-th vertex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BoundaryWalk {
    pub corners: Vec<DirCorner>,
}

impl BoundaryWalk {
    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.corners.iter().map(|c| c.vertex).collect()
    }

    /// Darts in traversal order, the `i`-th one leaving the `i`-th vertex.
    pub fn darts(&self) -> Vec<Dart> {
        self.corners.iter().map(|c| Dart::new(c.vertex, c.to)).collect()
    }

    pub fn reversed(&self) -> BoundaryWalk {
        BoundaryWalk { corners: self.corners.iter().rev().map(|c| c.reversed()).collect() }
    }

    /// Rotates the walk so that it starts at position `i`.
    pub fn rotated(&self, i: usize) -> BoundaryWalk {
        let mut corners = self.corners.clone();
        corners.rotate_left(i);
        BoundaryWalk { corners }
    }
}

/// True when `a` and `b` are equal as cyclic sequences.
pub fn cyclic_eq<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i]))
}

/// Cyclic equality allowing one of the sequences to be reversed.
pub fn cyclic_eq_undirected<T: PartialEq + Clone>(a: &[T], b: &[T]) -> bool {
    let rev: Vec<T> = b.iter().rev().cloned().collect();
    cyclic_eq(a, b) || cyclic_eq(a, &rev)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceKind {
    pub orientable: bool,
    /// Genus when orientable, demigenus otherwise.
    pub genus: u32,
}

impl SurfaceKind {
    pub fn sphere() -> SurfaceKind {
        SurfaceKind { orientable: true, genus: 0 }
    }

    pub fn euler_characteristic(&self) -> i64 {
        if self.orientable {
            2 - 2 * i64::from(self.genus)
        } else {
            2 - i64::from(self.genus)
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orientable {
            write!(f, "orientable, genus {}", self.genus)
        } else {
            write!(f, "non-orientable, demigenus {}", self.genus)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("rotation at {v} lists {w}, but the rotation at {w} does not list {v}")]
    Asymmetric { v: VertexId, w: VertexId },
    #[error("rotation at {0} repeats a neighbor")]
    RepeatedDart(VertexId),
    #[error("signature given for non-edge {0}-{1}")]
    SignatureOnNonEdge(VertexId, VertexId),
    #[error("face walk revisits a corner at {0} in the opposite direction")]
    BrokenOrbit(VertexId),
    #[error("polygon edge {0}-{1} is used {2} times instead of twice")]
    PolygonEdgeUse(VertexId, VertexId, usize),
    #[error("corners around vertex {0} do not close up into a single disk")]
    NonManifoldVertex(VertexId),
    #[error("orientable scheme with odd Euler characteristic {0}")]
    ParityError(i64),
    #[error("Euler characteristic {0} is above 2")]
    CharacteristicTooLarge(i64),
}

/// Rotation system with edge signatures. Rotations list neighbors, which is
/// enough to name darts because graphs are simple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingScheme {
    rotation: BTreeMap<VertexId, Vec<VertexId>>,
    negative: BTreeSet<Edge>,
}

impl EmbeddingScheme {
    pub fn new(
        rotation: BTreeMap<VertexId, Vec<VertexId>>,
        negative: BTreeSet<Edge>,
    ) -> Result<EmbeddingScheme, EmbeddingError> {
        for (&v, rot) in &rotation {
            let set: BTreeSet<_> = rot.iter().collect();
            if set.len() != rot.len() {
                return Err(EmbeddingError::RepeatedDart(v));
            }
            for &w in rot {
                if w == v {
                    return Err(GraphError::SelfLoop(v).into());
                }
                if !rotation.get(&w).is_some_and(|r| r.contains(&v)) {
                    return Err(EmbeddingError::Asymmetric { v, w });
                }
            }
        }
        for e in &negative {
            if !rotation.get(&e.0).is_some_and(|r| r.contains(&e.1)) {
                return Err(EmbeddingError::SignatureOnNonEdge(e.0, e.1));
            }
        }
        Ok(EmbeddingScheme { rotation, negative })
    }

    /// All-positive scheme with each rotation in increasing neighbor order.
    pub fn sorted(g: &Graph) -> EmbeddingScheme {
        let rotation = g.vertices().map(|v| (v, g.neighbors(v).collect())).collect();
        EmbeddingScheme { rotation, negative: BTreeSet::new() }
    }

    pub fn graph(&self) -> Graph {
        let mut g = Graph::new();
        for (&v, rot) in &self.rotation {
            g.add_vertex(v);
            for &w in rot {
                if v < w {
                    g.add_edge(v, w).expect("validated scheme");
                }
            }
        }
        g
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.rotation.keys().copied()
    }

    pub fn rotations(&self) -> &BTreeMap<VertexId, Vec<VertexId>> {
        &self.rotation
    }

    pub fn negative_edges(&self) -> &BTreeSet<Edge> {
        &self.negative
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        self.rotation.get(&v).map_or(&[], |r| r.as_slice())
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.rotation.contains_key(&v)
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn m(&self) -> usize {
        self.rotation.values().map(|r| r.len()).sum::<usize>() / 2
    }

    pub fn sign(&self, u: VertexId, v: VertexId) -> Sign {
        if self.negative.contains(&Edge::new(u, v)) {
            -1
        } else {
            1
        }
    }

    pub fn is_all_positive(&self) -> bool {
        self.negative.is_empty()
    }

    pub fn position(&self, v: VertexId, w: VertexId) -> Option<usize> {
        self.rotation.get(&v)?.iter().position(|&x| x == w)
    }

    pub fn succ(&self, v: VertexId, w: VertexId) -> VertexId {
        let rot = &self.rotation[&v];
        let i = self.position(v, w).expect("dart exists");
        rot[(i + 1) % rot.len()]
    }

    pub fn pred(&self, v: VertexId, w: VertexId) -> VertexId {
        let rot = &self.rotation[&v];
        let i = self.position(v, w).expect("dart exists");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Reverses the rotation at `v` and flips the signs of its edges. The
    /// result describes the same embedding.
    pub fn switch_vertex(&mut self, v: VertexId) {
        let rot = self.rotation.get_mut(&v).expect("vertex exists");
        rot.reverse();
        for &w in rot.iter() {
            let e = Edge::new(v, w);
            if !self.negative.remove(&e) {
                self.negative.insert(e);
            }
        }
    }

    pub fn set_sign(&mut self, u: VertexId, v: VertexId, s: Sign) {
        let e = Edge::new(u, v);
        if s < 0 {
            self.negative.insert(e);
        } else {
            self.negative.remove(&e);
        }
    }

    /// Reverses every rotation; the mirror image of the embedding.
    pub fn mirrored(&self) -> EmbeddingScheme {
        let mut out = self.clone();
        for rot in out.rotation.values_mut() {
            rot.reverse();
        }
        out
    }

    /// The same embedding with vertices renamed by `f`, which must be
    /// injective.
    pub fn relabeled(&self, f: impl Fn(VertexId) -> VertexId) -> EmbeddingScheme {
        EmbeddingScheme {
            rotation: self.rotation.iter().map(|(&v, r)| (f(v), r.iter().map(|&w| f(w)).collect())).collect(),
            negative: self.negative.iter().map(|e| Edge::new(f(e.0), f(e.1))).collect(),
        }
    }

    /// Vertices to switch so that every signature becomes +1, or `None` when
    /// the embedded surface is non-orientable.
    pub fn orienting_switches(&self) -> Option<BTreeSet<VertexId>> {
        let mut bit: BTreeMap<VertexId, bool> = BTreeMap::new();
        for &start in self.rotation.keys() {
            if bit.contains_key(&start) {
                continue;
            }
            bit.insert(start, false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let bv = bit[&v];
                for &w in &self.rotation[&v] {
                    let want = bv ^ (self.sign(v, w) < 0);
                    match bit.get(&w) {
                        Some(&bw) if bw != want => return None,
                        Some(_) => {}
                        None => {
                            bit.insert(w, want);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        Some(bit.into_iter().filter(|&(_, b)| b).map(|(v, _)| v).collect())
    }

    /// Equivalent all-positive scheme when one exists.
    pub fn normalized_orientable(&self) -> Option<EmbeddingScheme> {
        let switches = self.orienting_switches()?;
        let mut out = self.clone();
        for v in switches {
            out.switch_vertex(v);
        }
        debug_assert!(out.is_all_positive());
        Some(out)
    }

    fn index(&self) -> HashMap<(VertexId, VertexId), usize> {
        let mut idx = HashMap::with_capacity(2 * self.m());
        for (&v, rot) in &self.rotation {
            for (i, &w) in rot.iter().enumerate() {
                idx.insert((v, w), i);
            }
        }
        idx
    }

    /// Traces the walk through the gap after `after` at `vertex`, entering it
    /// with signature product `flag`.
    pub fn trace_from(&self, start: DirCorner) -> Result<BoundaryWalk, EmbeddingError> {
        let idx = self.index();
        self.trace_with(&idx, start, &mut BTreeSet::new())
    }

    fn trace_with(
        &self,
        idx: &HashMap<(VertexId, VertexId), usize>,
        start: DirCorner,
        seen: &mut BTreeSet<(VertexId, usize)>,
    ) -> Result<BoundaryWalk, EmbeddingError> {
        let mut corners = Vec::new();
        let mut cur = start;
        let start_gap = cur.gap();
        loop {
            let rot = &self.rotation[&cur.vertex];
            let gap_index = idx[&cur.gap()];
            if !seen.insert((cur.vertex, gap_index)) {
                return Err(EmbeddingError::BrokenOrbit(cur.vertex));
            }
            debug_assert!(rot.contains(&cur.to));
            corners.push(cur);
            let w = cur.to;
            let flag = cur.flag * self.sign(cur.vertex, w);
            let rot_w = &self.rotation[&w];
            let j = idx[&(w, cur.vertex)];
            let d = rot_w.len();
            let next_to = if flag > 0 { rot_w[(j + 1) % d] } else { rot_w[(j + d - 1) % d] };
            cur = DirCorner { vertex: w, from: cur.vertex, to: next_to, flag };
            if cur.gap() == start_gap {
                if cur.flag != start.flag {
                    return Err(EmbeddingError::BrokenOrbit(cur.vertex));
                }
                return Ok(BoundaryWalk { corners });
            }
        }
    }

    /// Corner through the gap right after neighbor `after` at `v`, traversed
    /// in the rotation's own direction.
    pub fn corner_after(&self, v: VertexId, after: VertexId) -> DirCorner {
        DirCorner { vertex: v, from: after, to: self.succ(v, after), flag: 1 }
    }

    /// All face boundary walks, one orbit per face. A graph with a single
    /// vertex and no edges has one empty face.
    pub fn trace_faces(&self) -> Result<Vec<BoundaryWalk>, EmbeddingError> {
        if self.m() == 0 {
            return Ok(vec![BoundaryWalk::default(); usize::from(self.n() > 0)]);
        }
        let idx = self.index();
        let mut seen = BTreeSet::new();
        let mut faces = Vec::new();
        for (&v, rot) in &self.rotation {
            for i in 0..rot.len() {
                if seen.contains(&(v, i)) {
                    continue;
                }
                let start = DirCorner { vertex: v, from: rot[i], to: rot[(i + 1) % rot.len()], flag: 1 };
                faces.push(self.trace_with(&idx, start, &mut seen)?);
            }
        }
        Ok(faces)
    }

    pub fn euler_characteristic(&self) -> Result<i64, EmbeddingError> {
        let f = self.trace_faces()?.len() as i64;
        Ok(self.n() as i64 - self.m() as i64 + f)
    }

    /// Orientability follows from whether switching can make every signature
    /// positive; the genus then follows from the Euler characteristic.
    pub fn euler_genus(&self) -> Result<SurfaceKind, EmbeddingError> {
        let chi = self.euler_characteristic()?;
        if chi > 2 {
            return Err(EmbeddingError::CharacteristicTooLarge(chi));
        }
        let orientable = self.orienting_switches().is_some();
        if orientable {
            if chi % 2 != 0 {
                return Err(EmbeddingError::ParityError(chi));
            }
            Ok(SurfaceKind { orientable, genus: ((2 - chi) / 2) as u32 })
        } else {
            Ok(SurfaceKind { orientable, genus: (2 - chi) as u32 })
        }
    }

    /// Builds the signed scheme of a closed 2-cell complex given by its face
    /// boundaries. Every edge must be used exactly twice and the corners at
    /// each vertex must close up into one cycle.
    pub fn from_polygons(faces: &[Vec<VertexId>]) -> Result<EmbeddingScheme, EmbeddingError> {
        let mut uses: BTreeMap<Edge, usize> = BTreeMap::new();
        // corners[v] = (face, position, prev neighbor, next neighbor)
        let mut corners: BTreeMap<VertexId, Vec<(usize, usize, VertexId, VertexId)>> = BTreeMap::new();
        for (fi, face) in faces.iter().enumerate() {
            let k = face.len();
            for i in 0..k {
                let (a, b) = (face[i], face[(i + 1) % k]);
                if a == b {
                    return Err(GraphError::SelfLoop(a).into());
                }
                *uses.entry(Edge::new(a, b)).or_default() += 1;
                corners.entry(face[i]).or_default().push((fi, i, face[(i + k - 1) % k], face[(i + 1) % k]));
            }
        }
        for (e, &c) in &uses {
            if c != 2 {
                return Err(EmbeddingError::PolygonEdgeUse(e.0, e.1, c));
            }
        }
        let mut rotation = BTreeMap::new();
        // flag[(face, position)] = +1 when the face crosses the corner in
        // rotation order.
        let mut flag: BTreeMap<(usize, usize), Sign> = BTreeMap::new();
        for (&v, cs) in &corners {
            let mut used = vec![false; cs.len()];
            let first = cs.iter().map(|c| c.2.min(c.3)).min().expect("non-empty");
            let mut order = vec![first];
            let mut cur = first;
            loop {
                let Some(ci) = (0..cs.len()).find(|&i| !used[i] && (cs[i].2 == cur || cs[i].3 == cur)) else {
                    break;
                };
                used[ci] = true;
                let (fi, pos, p, n) = cs[ci];
                let next = if p == cur { n } else { p };
                flag.insert((fi, pos), if p == cur { 1 } else { -1 });
                if next == first {
                    break;
                }
                order.push(next);
                cur = next;
            }
            if used.iter().any(|u| !u) {
                return Err(EmbeddingError::NonManifoldVertex(v));
            }
            rotation.insert(v, order);
        }
        let mut negative = BTreeSet::new();
        for (fi, face) in faces.iter().enumerate() {
            let k = face.len();
            for i in 0..k {
                let j = (i + 1) % k;
                if flag[&(fi, i)] != flag[&(fi, j)] {
                    negative.insert(Edge::new(face[i], face[j]));
                }
            }
        }
        let scheme = EmbeddingScheme::new(rotation, negative)?;
        Ok(scheme)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    fn k4_torus() -> EmbeddingScheme {
        // a=1, b=2, c=3, d=4; rotations read off the boundary walks
        let rot = BTreeMap::from([(1, vec![4, 2, 3]), (2, vec![1, 4, 3]), (3, vec![1, 2, 4]), (4, vec![2, 3, 1])]);
        EmbeddingScheme::new(rot, BTreeSet::new()).unwrap()
    }

    #[test]
    fn k4_torus_faces() {
        let s = k4_torus();
        let faces = s.trace_faces().unwrap();
        let mut lens: Vec<_> = faces.iter().map(|f| f.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![3, 9]);
        let long = faces.iter().find(|f| f.len() == 9).unwrap();
        assert!(cyclic_eq(&long.vertices(), &[4, 1, 2, 4, 3, 1, 4, 2, 3]));
        assert_eq!(s.euler_genus().unwrap(), SurfaceKind { orientable: true, genus: 1 });
    }

    #[test]
    fn triangle_has_two_faces() {
        let s = EmbeddingScheme::sorted(&families::cycle(3));
        let faces = s.trace_faces().unwrap();
        assert_eq!(faces.len(), 2);
        for f in &faces {
            assert!(cyclic_eq_undirected(&f.vertices(), &[1, 2, 3]));
        }
    }

    #[test]
    fn switching_preserves_faces() {
        let mut s = k4_torus();
        s.switch_vertex(2);
        s.switch_vertex(3);
        assert!(!s.is_all_positive());
        assert_eq!(s.trace_faces().unwrap().len(), 2);
        assert_eq!(s.euler_genus().unwrap().genus, 1);
        assert!(s.normalized_orientable().unwrap().is_all_positive());
    }

    #[test]
    fn single_vertex_is_a_sphere() {
        let mut g = Graph::new();
        g.add_vertex(7);
        let s = EmbeddingScheme::sorted(&g);
        assert_eq!(s.euler_genus().unwrap(), SurfaceKind::sphere());
    }

    #[test]
    fn polygons_of_the_tetrahedron() {
        let faces = vec![vec![1, 2, 3], vec![1, 3, 4], vec![1, 4, 2], vec![2, 4, 3]];
        let s = EmbeddingScheme::from_polygons(&faces).unwrap();
        assert!(s.orienting_switches().is_some());
        assert_eq!(s.euler_genus().unwrap(), SurfaceKind::sphere());
    }

    #[test]
    fn hemi_icosahedron_is_projective() {
        let faces = vec![
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![1, 5, 6],
            vec![1, 6, 2],
            vec![2, 3, 5],
            vec![3, 4, 6],
            vec![4, 5, 2],
            vec![5, 6, 3],
            vec![6, 2, 4],
        ];
        let s = EmbeddingScheme::from_polygons(&faces).unwrap();
        let traced = s.trace_faces().unwrap();
        assert_eq!(traced.len(), 10);
        assert_eq!(s.euler_genus().unwrap(), SurfaceKind { orientable: false, genus: 1 });
    }

    #[test]
    fn characteristic_of_surface_kinds() {
        assert_eq!(SurfaceKind { orientable: true, genus: 2 }.euler_characteristic(), -2);
        assert_eq!(SurfaceKind { orientable: false, genus: 3 }.euler_characteristic(), -1);
    }
}
