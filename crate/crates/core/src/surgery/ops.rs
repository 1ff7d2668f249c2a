//! Cycle duplication, path duplication and cycle doubling on signed rotation
//! systems. Every operation returns the cut scheme together with the vertex
//! correspondence and, for every gap of the new scheme, where it came from.

use super::SurgeryError;
use crate::embedding::{DirCorner, EmbeddingScheme, Sign};
use crate::graph::{Edge, VertexId};
use std::collections::{BTreeMap, BTreeSet};

/// A rotation gap, named by its vertex and the neighbor it follows.
pub type Gap = (VertexId, VertexId);

/// Correspondence between the vertices of consecutive stages. Edges are not
/// stored: every child edge projects onto the parent edge joining the
/// parents of its endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Splitting {
    pub children: BTreeMap<VertexId, Vec<VertexId>>,
    pub parent: BTreeMap<VertexId, VertexId>,
}

impl Splitting {
    pub fn from_parent(parent: BTreeMap<VertexId, VertexId>) -> Splitting {
        let mut children: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for (&c, &p) in &parent {
            children.entry(p).or_default().push(c);
        }
        Splitting { children, parent }
    }

    pub fn degree(&self) -> usize {
        self.children.values().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn is_split(&self, v: VertexId) -> bool {
        self.children.get(&v).is_some_and(|c| c.len() > 1)
    }

    pub fn parent_of(&self, c: VertexId) -> VertexId {
        self.parent[&c]
    }

    /// Child edges projecting onto each parent edge.
    pub fn edge_images(&self, child: &EmbeddingScheme) -> BTreeMap<Edge, Vec<Edge>> {
        let mut out: BTreeMap<Edge, Vec<Edge>> = BTreeMap::new();
        for (&v, rot) in child.rotations() {
            for &w in rot {
                if v < w {
                    out.entry(Edge::new(self.parent[&v], self.parent[&w])).or_default().push(Edge(v, w));
                }
            }
        }
        out
    }
}

/// Where a gap of the cut scheme comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapOrigin {
    /// The same gap of the parent vertex.
    Old(Gap),
    /// A gap between two copies of object edges: it lies on a created face.
    New,
    /// A path endpoint gap glued from halves of cut parent gaps. `after` is
    /// the half next to the neighbor the gap follows, `before` the half next
    /// to its successor; `None` stands for the path side.
    Joint { after: Option<Gap>, before: Option<Gap> },
}

#[derive(Clone, Debug)]
pub struct Surgery {
    pub scheme: EmbeddingScheme,
    pub splitting: Splitting,
    /// Child vertices whose rotation is reversed relative to their parent.
    pub flipped: BTreeSet<VertexId>,
    pub gaps: BTreeMap<Gap, GapOrigin>,
    /// The two copies of every object vertex, in object order: (left, right)
    /// for duplications, (v'_i, v'_{p+i}) for doubling.
    pub copies: Vec<(VertexId, VertexId)>,
}

/// Image of a child corner in the parent stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerOrigin {
    Old(DirCorner),
    New,
    /// Halves of cut gaps on the side of `from` and of `to`.
    Joint {
        incoming: Option<Gap>,
        outgoing: Option<Gap>,
    },
}

impl Surgery {
    pub fn corner_origin(&self, c: DirCorner) -> CornerOrigin {
        match self.gaps[&c.gap()] {
            GapOrigin::Old(g) => {
                let p = &self.splitting.parent;
                let flag = if self.flipped.contains(&c.vertex) { -c.flag } else { c.flag };
                let pc = DirCorner { vertex: p[&c.vertex], from: p[&c.from], to: p[&c.to], flag };
                debug_assert_eq!(pc.gap(), g);
                CornerOrigin::Old(pc)
            }
            GapOrigin::New => CornerOrigin::New,
            GapOrigin::Joint { after, before } => {
                if c.flag > 0 {
                    CornerOrigin::Joint { incoming: after, outgoing: before }
                } else {
                    CornerOrigin::Joint { incoming: before, outgoing: after }
                }
            }
        }
    }

    /// Switches child vertices in place, keeping the gap map and flip set
    /// accurate.
    pub fn switch_children(&mut self, vs: &BTreeSet<VertexId>) {
        let mut gaps = BTreeMap::new();
        for (&(v, after), &origin) in &self.gaps {
            if vs.contains(&v) {
                let succ = self.scheme.succ(v, after);
                let origin = match origin {
                    GapOrigin::Joint { after, before } => GapOrigin::Joint { after: before, before: after },
                    o => o,
                };
                gaps.insert((v, succ), origin);
            } else {
                gaps.insert((v, after), origin);
            }
        }
        for &v in vs {
            self.scheme.switch_vertex(v);
            if !self.flipped.remove(&v) {
                self.flipped.insert(v);
            }
        }
        self.gaps = gaps;
    }
}

#[derive(Clone, Copy, Debug)]
enum Entry {
    /// An original neighbor; resolved to whichever of its copies holds the
    /// reverse dart.
    Old(VertexId),
    /// A freshly created neighbor (copy of an object vertex).
    New(VertexId),
}

#[derive(Clone, Copy, Debug)]
enum Tag {
    Keep,
    New,
    Joint { after: Option<Gap>, before: Option<Gap> },
}

struct SplitPlan {
    /// For each split vertex, its copies with their rotations. Each entry
    /// carries the tag of the gap right after it.
    copies: BTreeMap<VertexId, Vec<(VertexId, Vec<(Entry, Tag)>)>>,
    /// Signatures of edges between new copies.
    new_signs: BTreeMap<Edge, Sign>,
}

fn switch_gap(s: &EmbeddingScheme, g: Gap) -> Gap {
    (g.0, s.succ(g.0, g.1))
}

/// Switches `order[1..]` where needed so that consecutive object edges are
/// positive; returns the switched scheme and switched set.
fn positive_along(s: &EmbeddingScheme, order: &[VertexId]) -> (EmbeddingScheme, BTreeSet<VertexId>) {
    let mut out = s.clone();
    let mut switched = BTreeSet::new();
    for i in 1..order.len() {
        if out.sign(order[i - 1], order[i]) < 0 {
            out.switch_vertex(order[i]);
            switched.insert(order[i]);
        }
    }
    (out, switched)
}

/// Neighbors of `v` in rotation order, starting right after `start` and
/// stopping right before `stop` (both exclusive).
fn arc(s: &EmbeddingScheme, v: VertexId, start: VertexId, stop: VertexId) -> Vec<VertexId> {
    let mut out = Vec::new();
    let mut x = s.succ(v, start);
    while x != stop {
        out.push(x);
        x = s.succ(v, x);
    }
    out
}

fn apply_plan(
    s: &EmbeddingScheme,
    switched: &BTreeSet<VertexId>,
    plan: SplitPlan,
    copies: Vec<(VertexId, VertexId)>,
) -> Result<Surgery, SurgeryError> {
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    // holder[(x, v)]: the copy of x whose rotation lists v.
    let mut holder: BTreeMap<(VertexId, VertexId), VertexId> = BTreeMap::new();
    for (&v, cs) in &plan.copies {
        for (id, rot) in cs {
            parent.insert(*id, v);
            for (e, _) in rot {
                if let Entry::Old(x) = e {
                    holder.insert((v, *x), *id);
                }
            }
        }
    }
    for v in s.vertices() {
        if !plan.copies.contains_key(&v) {
            parent.insert(v, v);
        }
    }
    let resolve = |x: VertexId, from: VertexId| -> VertexId { holder.get(&(x, from)).copied().unwrap_or(x) };

    let mut rotation: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut negative = BTreeSet::new();
    let mut gaps = BTreeMap::new();
    let mut flipped = BTreeSet::new();
    // Map a gap of the switched scheme back to the caller's scheme.
    let to_orig = |g: Gap| -> Gap {
        if switched.contains(&g.0) {
            switch_gap(s, g)
        } else {
            g
        }
    };
    for v in s.vertices() {
        if let Some(cs) = plan.copies.get(&v) {
            for (id, rot) in cs {
                let mut r = Vec::with_capacity(rot.len());
                for &(e, _) in rot {
                    let w = match e {
                        Entry::Old(x) => {
                            let w = resolve(x, v);
                            if s.sign(v, x) < 0 {
                                negative.insert(Edge::new(*id, w));
                            }
                            w
                        }
                        Entry::New(w) => {
                            if plan.new_signs.get(&Edge::new(*id, w)).copied().unwrap_or(1) < 0 {
                                negative.insert(Edge::new(*id, w));
                            }
                            w
                        }
                    };
                    r.push(w);
                }
                for (i, &(e, tag)) in rot.iter().enumerate() {
                    let origin = match tag {
                        Tag::Keep => {
                            let pre = match e {
                                Entry::Old(x) => x,
                                Entry::New(w) => parent[&w],
                            };
                            GapOrigin::Old(to_orig((v, pre)))
                        }
                        Tag::New => GapOrigin::New,
                        Tag::Joint { after, before } => {
                            GapOrigin::Joint { after: after.map(to_orig), before: before.map(to_orig) }
                        }
                    };
                    gaps.insert((*id, r[i]), origin);
                }
                if switched.contains(&v) {
                    flipped.insert(*id);
                }
                rotation.insert(*id, r);
            }
        } else {
            let r: Vec<VertexId> = s.rotation(v).iter().map(|&x| resolve(x, v)).collect();
            for (&x, &w) in s.rotation(v).iter().zip(&r) {
                if s.sign(v, x) < 0 {
                    negative.insert(Edge::new(v, w));
                }
                gaps.insert((v, w), GapOrigin::Old(to_orig((v, x))));
            }
            if switched.contains(&v) {
                flipped.insert(v);
            }
            rotation.insert(v, r);
        }
    }
    let scheme = EmbeddingScheme::new(rotation, negative).map_err(SurgeryError::Embedding)?;
    Ok(Surgery { scheme, splitting: Splitting::from_parent(parent), flipped, gaps, copies })
}

fn fresh_ids(s: &EmbeddingScheme) -> impl FnMut() -> VertexId {
    let mut next = s.vertices().max().map_or(1, |m| m + 1);
    move || {
        let id = next;
        next += 1;
        id
    }
}

fn check_object(s: &EmbeddingScheme, object: &[VertexId], closed: bool) -> Result<(), SurgeryError> {
    let set: BTreeSet<_> = object.iter().collect();
    if set.len() != object.len() {
        return Err(SurgeryError::NotSimple);
    }
    for &v in object {
        if !s.has_vertex(v) {
            return Err(SurgeryError::NotSimple);
        }
    }
    let n = object.len();
    let edges = if closed { n } else { n.saturating_sub(1) };
    for i in 0..edges {
        if s.position(object[i], object[(i + 1) % n]).is_none() {
            return Err(SurgeryError::NotSimple);
        }
    }
    if closed && n < 3 {
        return Err(SurgeryError::NotSimple);
    }
    Ok(())
}

/// Sign product along a closed cycle.
pub fn cycle_sign(s: &EmbeddingScheme, cycle: &[VertexId]) -> Sign {
    let n = cycle.len();
    (0..n).map(|i| s.sign(cycle[i], cycle[(i + 1) % n])).product()
}

/// Cuts along a two-sided cycle. Copies are (left, right), where the left
/// copy keeps the neighbors that follow the next cycle vertex in rotation
/// order.
pub fn duplicate_cycle(s: &EmbeddingScheme, cycle: &[VertexId]) -> Result<Surgery, SurgeryError> {
    check_object(s, cycle, true)?;
    if cycle_sign(s, cycle) < 0 {
        return Err(SurgeryError::OneSidedCycle);
    }
    let (t, switched) = positive_along(s, cycle);
    let p = cycle.len();
    let mut fresh = fresh_ids(s);
    let ids: Vec<(VertexId, VertexId)> = (0..p).map(|_| (fresh(), fresh())).collect();
    let mut plan = SplitPlan { copies: BTreeMap::new(), new_signs: BTreeMap::new() };
    for i in 0..p {
        let (next, prev) = ((i + 1) % p, (i + p - 1) % p);
        let v = cycle[i];
        let a = arc(&t, v, cycle[next], cycle[prev]);
        let b = arc(&t, v, cycle[prev], cycle[next]);
        let mut left = vec![(Entry::New(ids[next].0), Tag::Keep)];
        left.extend(a.iter().map(|&x| (Entry::Old(x), Tag::Keep)));
        left.push((Entry::New(ids[prev].0), Tag::New));
        let mut right = vec![(Entry::New(ids[prev].1), Tag::Keep)];
        right.extend(b.iter().map(|&x| (Entry::Old(x), Tag::Keep)));
        right.push((Entry::New(ids[next].1), Tag::New));
        plan.copies.insert(v, vec![(ids[i].0, left), (ids[i].1, right)]);
    }
    let out = apply_plan(&t, &switched, plan, ids)?;
    if !out.scheme.graph().is_connected() {
        return Err(SurgeryError::SeparatingCycle);
    }
    Ok(out)
}

/// Cuts along a path joining the gap `start_gap` (at `path[0]`) to the gap
/// `end_gap` (at the last vertex); both gaps are named in `s`. Copies are
/// (left, right); walking the merged face in rotation order traverses the
/// left copy from the first vertex to the last.
pub fn duplicate_path(
    s: &EmbeddingScheme,
    path: &[VertexId],
    start_gap: Gap,
    end_gap: Gap,
) -> Result<Surgery, SurgeryError> {
    check_object(s, path, false)?;
    if path.is_empty() || start_gap.0 != path[0] || end_gap.0 != *path.last().unwrap() {
        return Err(SurgeryError::BadCorner);
    }
    if s.position(start_gap.0, start_gap.1).is_none() || s.position(end_gap.0, end_gap.1).is_none() {
        return Err(SurgeryError::BadCorner);
    }
    let (t, switched) = positive_along(s, path);
    // Gaps in `t` coordinates.
    let chi_t = to_switched(s, &switched, start_gap);
    let psi_t = to_switched(s, &switched, end_gap);
    let n = path.len();
    let mut fresh = fresh_ids(s);
    let ids: Vec<(VertexId, VertexId)> = (0..n).map(|_| (fresh(), fresh())).collect();
    let mut plan = SplitPlan { copies: BTreeMap::new(), new_signs: BTreeMap::new() };
    let w0 = path[0];
    if n == 1 {
        if chi_t == psi_t {
            return Err(SurgeryError::SameFace);
        }
        let (c, e) = (chi_t.1, psi_t.1);
        // copy1 = [succ(c) .. e], copy2 = [succ(e) .. c]
        let mut one: Vec<(Entry, Tag)> = Vec::new();
        let mut x = t.succ(w0, c);
        loop {
            let tag = if x == e { Tag::Joint { after: Some(psi_t), before: Some(chi_t) } } else { Tag::Keep };
            one.push((Entry::Old(x), tag));
            if x == e {
                break;
            }
            x = t.succ(w0, x);
        }
        let mut two: Vec<(Entry, Tag)> = Vec::new();
        let mut x = t.succ(w0, e);
        loop {
            let tag = if x == c { Tag::Joint { after: Some(chi_t), before: Some(psi_t) } } else { Tag::Keep };
            two.push((Entry::Old(x), tag));
            if x == c {
                break;
            }
            x = t.succ(w0, x);
        }
        // copy2 is entered from the first face and leads to the second,
        // like the left copy of a longer path.
        plan.copies.insert(w0, vec![(ids[0].0, two), (ids[0].1, one)]);
        return apply_plan(&t, &switched, plan, ids);
    }
    let ws = path[n - 1];
    let (a, c) = (path[1], chi_t.1);
    if c == a || t.succ(w0, c) == a {
        return Err(SurgeryError::BadCorner);
    }
    let (b, e) = (path[n - 2], psi_t.1);
    if e == b || t.succ(ws, e) == b {
        return Err(SurgeryError::BadCorner);
    }
    // First vertex.
    let mut left = vec![(Entry::New(ids[1].0), Tag::Keep)];
    let l_arc = arc(&t, w0, a, t.succ(w0, c));
    for (i, &x) in l_arc.iter().enumerate() {
        let tag = if i + 1 == l_arc.len() { Tag::Joint { after: Some(chi_t), before: None } } else { Tag::Keep };
        left.push((Entry::Old(x), tag));
    }
    let mut right: Vec<(Entry, Tag)> = arc(&t, w0, c, a).into_iter().map(|x| (Entry::Old(x), Tag::Keep)).collect();
    right.push((Entry::New(ids[1].1), Tag::Joint { after: None, before: Some(chi_t) }));
    plan.copies.insert(w0, vec![(ids[0].0, left), (ids[0].1, right)]);
    // Interior.
    for i in 1..n - 1 {
        let v = path[i];
        let (next, prev) = (path[i + 1], path[i - 1]);
        let mut left = vec![(Entry::New(ids[i + 1].0), Tag::Keep)];
        left.extend(arc(&t, v, next, prev).into_iter().map(|x| (Entry::Old(x), Tag::Keep)));
        left.push((Entry::New(ids[i - 1].0), Tag::New));
        let mut right = vec![(Entry::New(ids[i - 1].1), Tag::Keep)];
        right.extend(arc(&t, v, prev, next).into_iter().map(|x| (Entry::Old(x), Tag::Keep)));
        right.push((Entry::New(ids[i + 1].1), Tag::New));
        plan.copies.insert(v, vec![(ids[i].0, left), (ids[i].1, right)]);
    }
    // Last vertex: right side runs from after b to e, left side from after e
    // back to b.
    let mut right = vec![(Entry::New(ids[n - 2].1), Tag::Keep)];
    let r_arc = arc(&t, ws, b, t.succ(ws, e));
    for (i, &x) in r_arc.iter().enumerate() {
        let tag = if i + 1 == r_arc.len() { Tag::Joint { after: Some(psi_t), before: None } } else { Tag::Keep };
        right.push((Entry::Old(x), tag));
    }
    let mut left: Vec<(Entry, Tag)> = arc(&t, ws, e, b).into_iter().map(|x| (Entry::Old(x), Tag::Keep)).collect();
    left.push((Entry::New(ids[n - 2].0), Tag::Joint { after: None, before: Some(psi_t) }));
    plan.copies.insert(ws, vec![(ids[n - 1].0, left), (ids[n - 1].1, right)]);
    apply_plan(&t, &switched, plan, ids)
}

/// Names a gap of `s` in the coordinates of the scheme obtained by switching
/// `switched`.
fn to_switched(s: &EmbeddingScheme, switched: &BTreeSet<VertexId>, g: Gap) -> Gap {
    if switched.contains(&g.0) {
        // Gap between x and succ(x) becomes the gap after succ(x) once the
        // rotation is reversed.
        (g.0, s.succ(g.0, g.1))
    } else {
        g
    }
}

/// Cuts along a one-sided cycle of length p, producing one new face bounded
/// by a cycle of length 2p. Copies are (v'_i, v'_{p+i}).
pub fn double_cycle(s: &EmbeddingScheme, cycle: &[VertexId]) -> Result<Surgery, SurgeryError> {
    check_object(s, cycle, true)?;
    if cycle_sign(s, cycle) > 0 {
        return Err(SurgeryError::TwoSidedCycle);
    }
    let (t, switched) = positive_along(s, cycle);
    let p = cycle.len();
    let mut fresh = fresh_ids(s);
    let x: Vec<VertexId> = (0..2 * p).map(|_| fresh()).collect();
    let at = |j: usize| x[j % (2 * p)];
    let mut plan = SplitPlan { copies: BTreeMap::new(), new_signs: BTreeMap::new() };
    plan.new_signs.insert(Edge::new(at(p - 1), at(p)), -1);
    plan.new_signs.insert(Edge::new(at(2 * p - 1), at(0)), -1);
    for i in 0..p {
        let v = cycle[i];
        let (next, prev) = (cycle[(i + 1) % p], cycle[(i + p - 1) % p]);
        let mut first = vec![(Entry::New(at(i + 1)), Tag::Keep)];
        first.extend(arc(&t, v, next, prev).into_iter().map(|y| (Entry::Old(y), Tag::Keep)));
        first.push((Entry::New(at(i + 2 * p - 1)), Tag::New));
        let mut second = vec![(Entry::New(at(p + i + 2 * p - 1)), Tag::Keep)];
        second.extend(arc(&t, v, prev, next).into_iter().map(|y| (Entry::Old(y), Tag::Keep)));
        second.push((Entry::New(at(p + i + 1)), Tag::New));
        plan.copies.insert(v, vec![(at(i), first), (at(p + i), second)]);
    }
    let copies = (0..p).map(|i| (at(i), at(p + i))).collect();
    apply_plan(&t, &switched, plan, copies)
}
