//! Choosing what to cut: non-separating cycles and face-connecting paths.

use super::ops::{cycle_sign, double_cycle, duplicate_cycle, Gap};
use super::SurgeryError;
use crate::embedding::{BoundaryWalk, EmbeddingScheme};
use crate::graph::{Edge, VertexId};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Longest cycle tried by the exhaustive fallback search.
pub const DEFAULT_MAX_CYCLE_LEN: usize = 12;

/// Find-and-union over vertices or faces, for growing spanning forests.
struct Forest<T: Ord + Copy>(BTreeMap<T, T>);

impl<T: Ord + Copy> Forest<T> {
    fn root(&mut self, x: T) -> T {
        let p = *self.0.get(&x).unwrap_or(&x);
        if p == x {
            return x;
        }
        let r = self.root(p);
        self.0.insert(x, r);
        r
    }

    /// Joins the classes of `a` and `b`, false if already joined.
    fn join(&mut self, a: T, b: T) -> bool {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            return false;
        }
        self.0.insert(ra, rb);
        true
    }
}

/// Fundamental cycles of the edges left over by a tree-cotree decomposition,
/// shortest first. These span the cycle space modulo face boundaries, so
/// each one is non-separating. The tree avoids the edges in `avoid` where
/// it can and the cotree takes them where it can, so that the cycles stay
/// off them as far as possible.
pub fn homology_basis_cycles(s: &EmbeddingScheme, avoid: &BTreeSet<Edge>) -> Result<Vec<Vec<VertexId>>, SurgeryError> {
    let g = s.graph();
    let Some(root) = g.vertices().next() else {
        return Ok(Vec::new());
    };
    let mut edges = g.edges();
    edges.sort_by_key(|e| avoid.contains(e));
    let mut primal = Forest(BTreeMap::new());
    let tree_edges: BTreeSet<Edge> = edges.iter().copied().filter(|e| primal.join(e.0, e.1)).collect();

    let mut parent = BTreeMap::from([(root, None)]);
    let mut dist = BTreeMap::from([(root, 0u32)]);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for w in g.neighbors(u) {
            if tree_edges.contains(&Edge::new(u, w)) && !parent.contains_key(&w) {
                parent.insert(w, Some(u));
                dist.insert(w, dist[&u] + 1);
                queue.push_back(w);
            }
        }
    }
    if parent.len() != g.n() {
        return Err(SurgeryError::Stuck("graph is not connected".into()));
    }

    let faces = s.trace_faces().map_err(SurgeryError::Embedding)?;
    let mut sides: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for d in f.darts() {
            sides.entry(d.edge()).or_default().push(fi);
        }
    }
    edges.sort_by_key(|e| !avoid.contains(e));
    let mut dual = Forest(BTreeMap::new());
    let mut out = Vec::new();
    for e in edges {
        if tree_edges.contains(&e) {
            continue;
        }
        let fs = &sides[&e];
        if fs.len() == 2 && dual.join(fs[0], fs[1]) {
            continue;
        }
        out.push(fundamental_cycle(&parent, &dist, e));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn fundamental_cycle(
    parent: &BTreeMap<VertexId, Option<VertexId>>,
    dist: &BTreeMap<VertexId, u32>,
    e: Edge,
) -> Vec<VertexId> {
    let (mut u, mut v) = (e.0, e.1);
    let mut up = vec![u];
    let mut down = vec![v];
    while dist[&u] > dist[&v] {
        u = parent[&u].unwrap();
        up.push(u);
    }
    while dist[&v] > dist[&u] {
        v = parent[&v].unwrap();
        down.push(v);
    }
    while u != v {
        u = parent[&u].unwrap();
        v = parent[&v].unwrap();
        up.push(u);
        down.push(v);
    }
    down.pop();
    down.reverse();
    up.extend(down);
    up
}

/// Simple cycles of length exactly `len`, each listed once starting from its
/// smallest vertex.
pub fn simple_cycles_of_length(s: &EmbeddingScheme, len: usize) -> Vec<Vec<VertexId>> {
    fn extend(
        s: &EmbeddingScheme,
        len: usize,
        path: &mut Vec<VertexId>,
        on_path: &mut BTreeSet<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        let start = path[0];
        let last = *path.last().unwrap();
        let mut nbrs: Vec<VertexId> = s.rotation(last).to_vec();
        nbrs.sort_unstable();
        for w in nbrs {
            if path.len() == len {
                if w == start && path[1] < path[len - 1] {
                    out.push(path.clone());
                }
                continue;
            }
            if w <= start || on_path.contains(&w) {
                continue;
            }
            path.push(w);
            on_path.insert(w);
            extend(s, len, path, on_path, out);
            on_path.remove(&w);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for v in s.vertices() {
        let mut path = vec![v];
        let mut on = BTreeSet::from([v]);
        extend(s, len, &mut path, &mut on, &mut out);
    }
    out
}

/// True when cutting along `cycle` keeps the graph connected and lowers the
/// Euler genus by one.
pub fn cut_lowers_genus(s: &EmbeddingScheme, cycle: &[VertexId], one_sided: bool) -> bool {
    let Ok(before) = s.euler_characteristic() else {
        return false;
    };
    let cut = if one_sided { double_cycle(s, cycle) } else { duplicate_cycle(s, cycle) };
    let Ok(cut) = cut else {
        return false;
    };
    if !cut.scheme.graph().is_connected() {
        return false;
    }
    let want = if one_sided { 1 } else { 2 };
    cut.scheme.euler_characteristic().is_ok_and(|after| after - before == want)
}

fn cycle_edges(c: &[VertexId]) -> impl Iterator<Item = Edge> + '_ {
    (0..c.len()).map(move |i| Edge::new(c[i], c[(i + 1) % c.len()]))
}

/// A cycle whose cut lowers the Euler genus by one, two-sided or one-sided
/// as requested. Candidates from a homology basis are tried first, then all
/// simple cycles up to `max_len` in increasing length. Cycles using no edge
/// of `avoid` are preferred over all others.
pub fn find_non_separating_cycle(
    s: &EmbeddingScheme,
    want_one_sided: bool,
    max_len: usize,
    avoid: &BTreeSet<Edge>,
) -> Result<Vec<VertexId>, SurgeryError> {
    let wanted = |c: &[VertexId]| (cycle_sign(s, c) < 0) == want_one_sided;
    let basis = homology_basis_cycles(s, avoid)?;
    for strict in [true, false] {
        let short = (3..=max_len.min(s.n())).flat_map(|len| simple_cycles_of_length(s, len));
        let found = basis.iter().cloned().chain(short).find(|c| {
            !(strict && cycle_edges(c).any(|e| avoid.contains(&e)))
                && wanted(c)
                && cut_lowers_genus(s, c, want_one_sided)
        });
        if let Some(c) = found {
            return Ok(c);
        }
    }
    Err(SurgeryError::NoCycleFound)
}

/// A shortest path from the boundary of `chi` to the boundary of `psi` whose
/// interior avoids both, together with the gaps to cut at its ends. Edges in
/// `avoid` are used only when there is no path without them.
pub fn find_connecting_path(
    s: &EmbeddingScheme,
    chi: &BoundaryWalk,
    psi: &BoundaryWalk,
    avoid: &BTreeSet<Edge>,
) -> Result<(Vec<VertexId>, Gap, Gap), SurgeryError> {
    let none = BTreeSet::new();
    shortest_connection(s, chi, psi, avoid, true)
        .or_else(|_| shortest_connection(s, chi, psi, avoid, false))
        .or_else(|_| shortest_connection(s, chi, psi, &none, true))
        .or_else(|_| shortest_connection(s, chi, psi, &none, false))
}

/// Vertices of a walk, or only those it passes exactly once.
fn walk_vertices(w: &BoundaryWalk, once: bool) -> BTreeSet<VertexId> {
    let mut count: BTreeMap<VertexId, usize> = BTreeMap::new();
    for v in w.vertices() {
        *count.entry(v).or_default() += 1;
    }
    count.into_iter().filter(|&(_, c)| !once || c == 1).map(|(v, _)| v).collect()
}

fn shortest_connection(
    s: &EmbeddingScheme,
    chi: &BoundaryWalk,
    psi: &BoundaryWalk,
    avoid: &BTreeSet<Edge>,
    simple_ends: bool,
) -> Result<(Vec<VertexId>, Gap, Gap), SurgeryError> {
    // With simple ends, vertices a face passes more than once are neither
    // ends nor interior: splitting one would leave a copy twice on the
    // merged face.
    let (all_chi, all_psi) = (walk_vertices(chi, false), walk_vertices(psi, false));
    let on_psi = walk_vertices(psi, simple_ends);
    let starts: BTreeSet<VertexId> =
        walk_vertices(chi, simple_ends).into_iter().filter(|v| on_psi.contains(v) || !all_psi.contains(v)).collect();
    let blocked: BTreeSet<VertexId> = all_chi.union(&all_psi).copied().collect();
    let mut prev: BTreeMap<VertexId, Option<VertexId>> = blocked.iter().map(|&v| (v, None)).collect();
    let mut queue = VecDeque::new();
    let mut end = None;
    for &v in &starts {
        if on_psi.contains(&v) && end.is_none() {
            end = Some(v);
        }
        queue.push_back(v);
    }
    while end.is_none() {
        let Some(u) = queue.pop_front() else {
            return Err(SurgeryError::Stuck("faces are not connected".into()));
        };
        let mut nbrs = s.rotation(u).to_vec();
        nbrs.sort_unstable();
        for w in nbrs {
            if avoid.contains(&Edge::new(u, w)) {
                continue;
            }
            if on_psi.contains(&w) && !all_chi.contains(&w) {
                prev.insert(w, Some(u));
                end = Some(w);
                break;
            }
            if prev.contains_key(&w) {
                continue;
            }
            prev.insert(w, Some(u));
            queue.push_back(w);
        }
    }
    let mut path = vec![end.unwrap()];
    while let Some(Some(p)) = prev.get(path.last().unwrap()) {
        path.push(*p);
    }
    path.reverse();
    let pick = |walk: &BoundaryWalk, v: VertexId, avoid: Option<VertexId>| -> Option<Gap> {
        walk.corners
            .iter()
            .filter(|c| c.vertex == v)
            .map(|c| c.gap())
            .find(|&(x, after)| avoid.is_none_or(|a| after != a && s.succ(x, after) != a))
    };
    let s_len = path.len();
    let first = pick(chi, path[0], path.get(1).copied()).ok_or(SurgeryError::BadCorner)?;
    let last_avoid = if s_len > 1 { Some(path[s_len - 2]) } else { None };
    let last = pick(psi, path[s_len - 1], last_avoid).ok_or(SurgeryError::BadCorner)?;
    Ok((path, first, last))
}
