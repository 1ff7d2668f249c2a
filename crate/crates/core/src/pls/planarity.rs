//! Planarity with a distinguished face, certified edge by edge.
//!
//! A spanning tree of the planar graph is walked around, starting just
//! after a chosen corner of the root. Every visit of a vertex gets a
//! position, so the walk flattens into a line on which the remaining
//! (co-tree) edges are arcs. The graph is planar with that corner on a face
//! exactly when the arcs nest, which a stack run along the line confirms.
//! Each edge stores what the stack looked like where the walk crosses it,
//! so every vertex can replay its own stretch of the run.
//!
//! Positions not covered by any arc are the corners of the outer face.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

/// A co-tree edge, named by the positions of its two ends.
pub type Chord = (u32, u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeProof<V> {
    Tree {
        parent: V,
        /// Positions of the child's first and last visits.
        first: u32,
        last: u32,
        /// Innermost arc over the walk as it goes down to the child.
        enter: Option<Chord>,
        /// Innermost arc over the walk as it comes back up.
        leave: Option<Chord>,
    },
    CoTree {
        x: u32,
        y: u32,
        /// Innermost arc over this one.
        above: Option<Chord>,
    },
}

fn key<V: Ord>(a: V, b: V) -> (V, V) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotPlanar;

/// Proofs for every edge of a plane graph given by its rotations, rooted
/// at `root` with the walk starting just after neighbor `after`.
pub fn prove_planar<V: Ord + Copy + Debug>(
    rotation: &BTreeMap<V, Vec<V>>,
    root: V,
    after: V,
) -> Result<BTreeMap<(V, V), EdgeProof<V>>, NotPlanar> {
    struct Frame<V> {
        u: V,
        order: Vec<V>,
        next: usize,
    }
    let around = |u: V, from: V, include_from: bool| -> Vec<V> {
        let rot = &rotation[&u];
        let i = rot.iter().position(|&w| w == from).expect("neighbor in rotation");
        let n = rot.len();
        (1..=n).map(|t| rot[(i + t) % n]).filter(|&w| include_from || w != from).collect()
    };

    let mut seen = BTreeSet::from([root]);
    let mut tree: BTreeMap<(V, V), (V, u32, u32)> = BTreeMap::new();
    let mut first_of = BTreeMap::from([(root, 0u32)]);
    let mut open: BTreeMap<(V, V), u32> = BTreeMap::new();
    let mut chords: BTreeMap<(V, V), Chord> = BTreeMap::new();
    let mut pos = 0u32;
    let start = if rotation[&root].is_empty() { Vec::new() } else { around(root, after, true) };
    let mut stack = vec![Frame { u: root, order: start, next: 0 }];
    while let Some(top) = stack.last_mut() {
        let u = top.u;
        if let Some(&w) = top.order.get(top.next) {
            top.next += 1;
            if seen.insert(w) {
                pos += 1;
                first_of.insert(w, pos);
                tree.insert(key(u, w), (u, pos, 0));
                let order = around(w, u, false);
                stack.push(Frame { u: w, order, next: 0 });
            } else if !tree.contains_key(&key(u, w)) {
                match open.remove(&key(u, w)) {
                    Some(x) => {
                        chords.insert(key(u, w), (x, pos));
                    }
                    None => {
                        open.insert(key(u, w), pos);
                    }
                }
            }
        } else {
            stack.pop();
            if let Some(parent) = stack.last() {
                tree.get_mut(&key(parent.u, u)).unwrap().2 = pos;
                pos += 1;
            }
        }
    }
    if seen.len() != rotation.len() || !open.is_empty() {
        return Err(NotPlanar);
    }

    // Replay the stack along the line.
    let last = pos;
    let mut closes: BTreeMap<u32, Vec<Chord>> = BTreeMap::new();
    let mut opens: BTreeMap<u32, Vec<Chord>> = BTreeMap::new();
    for &c in chords.values() {
        opens.entry(c.0).or_default().push(c);
        closes.entry(c.1).or_default().push(c);
    }
    let mut arcs: Vec<Chord> = Vec::new();
    let mut above: BTreeMap<Chord, Option<Chord>> = BTreeMap::new();
    let mut after_pos: Vec<Option<Chord>> = Vec::with_capacity(last as usize + 1);
    for p in 0..=last {
        let mut cl = closes.remove(&p).unwrap_or_default();
        cl.sort_by_key(|a| Reverse(a.0));
        for c in cl {
            if arcs.pop() != Some(c) {
                return Err(NotPlanar);
            }
        }
        let mut op = opens.remove(&p).unwrap_or_default();
        op.sort_by_key(|a| Reverse(a.1));
        for c in op {
            above.insert(c, arcs.last().copied());
            arcs.push(c);
        }
        after_pos.push(arcs.last().copied());
    }
    if !arcs.is_empty() {
        return Err(NotPlanar);
    }
    let mut out = BTreeMap::new();
    for (e, (parent, first, last)) in tree {
        let enter = after_pos[first as usize - 1];
        let leave = after_pos[last as usize];
        out.insert(e, EdgeProof::Tree { parent, first, last, enter, leave });
    }
    for (e, c) in chords {
        out.insert(e, EdgeProof::CoTree { x: c.0, y: c.1, above: above[&c] });
    }
    Ok(out)
}

/// What one vertex checks of the proofs on its own edges. Returns its outer
/// corners as (arriving from, leaving to).
pub fn check_corners<V: Ord + Copy>(
    u: V,
    is_root: bool,
    incident: &[(V, EdgeProof<V>)],
) -> Result<Vec<(V, V)>, &'static str> {
    struct Child<V> {
        w: V,
        first: u32,
        last: u32,
        enter: Option<Chord>,
        leave: Option<Chord>,
    }
    let mut parent: Option<Child<V>> = None;
    let mut children = Vec::new();
    for &(w, p) in incident {
        if w == u {
            return Err("edge to itself");
        }
        if let EdgeProof::Tree { parent: par, first, last, enter, leave } = p {
            if first > last {
                return Err("visit interval is empty");
            }
            let c = Child { w, first, last, enter, leave };
            if par == w {
                if parent.replace(c).is_some() {
                    return Err("two tree parents");
                }
            } else if par == u {
                children.push(c);
            } else {
                return Err("tree parent is not on the edge");
            }
        }
    }
    if is_root != parent.is_none() {
        return Err("tree root disagrees with the header");
    }
    children.sort_by_key(|c| c.first);

    let first = parent.as_ref().map_or(0, |p| p.first);
    let mut positions = vec![first];
    let mut next = first + 1;
    for c in &children {
        if c.first != next {
            return Err("children's intervals do not tile the parent's");
        }
        positions.push(c.last + 1);
        next = c.last + 2;
    }
    let last = *positions.last().unwrap();
    if parent.as_ref().is_some_and(|p| p.last != last) {
        return Err("last visit disagrees with the tree edge");
    }

    let mut opens: BTreeMap<u32, Vec<(Chord, Option<Chord>, V)>> = BTreeMap::new();
    let mut closes: BTreeMap<u32, Vec<(Chord, Option<Chord>, V)>> = BTreeMap::new();
    for &(w, p) in incident {
        if let EdgeProof::CoTree { x, y, above } = p {
            if x >= y {
                return Err("arc ends out of order");
            }
            match (positions.binary_search(&x).is_ok(), positions.binary_search(&y).is_ok()) {
                (true, false) => opens.entry(x).or_default().push(((x, y), above, w)),
                (false, true) => closes.entry(y).or_default().push(((x, y), above, w)),
                _ => return Err("arc does not end at exactly one visit here"),
            }
        }
    }

    let mut corners: Vec<(Option<V>, Option<V>)> = Vec::new();
    let mut top = parent.as_ref().and_then(|p| p.enter);
    for (i, &q) in positions.iter().enumerate() {
        let mut arrival = if i == 0 { parent.as_ref().map(|p| p.w) } else { Some(children[i - 1].w) };
        if i > 0 {
            top = children[i - 1].leave;
        }
        let mut cl = closes.remove(&q).unwrap_or_default();
        cl.sort_by_key(|a| Reverse(a.0 .0));
        for (c, above, w) in cl {
            if top != Some(c) {
                return Err("arc closes while another is open inside it");
            }
            top = above;
            arrival = Some(w);
        }
        let uncovered = top.is_none();
        let mut op = opens.remove(&q).unwrap_or_default();
        op.sort_by_key(|a| Reverse(a.0 .1));
        let mut departure = None;
        for (c, above, w) in op {
            if above != top {
                return Err("arc opens under the wrong arc");
            }
            departure.get_or_insert(w);
            top = Some(c);
        }
        let down = children.get(i);
        let departure =
            departure.or(down.map(|c| c.w)).or(if down.is_none() { parent.as_ref().map(|p| p.w) } else { None });
        let expected = match down {
            Some(c) => c.enter,
            None => parent.as_ref().and_then(|p| p.leave),
        };
        if top != expected {
            return Err("arcs over a tree edge disagree with it");
        }
        if uncovered {
            corners.push((arrival, departure));
        }
    }
    if is_root {
        if positions.len() == 1 {
            return if incident.is_empty() { Ok(Vec::new()) } else { Err("root has edges but no tree children") };
        }
        // The walk was cut open at this corner; join its two ends.
        let (arrival, _) = corners.pop().ok_or("root's last visit is covered")?;
        let head = corners.first_mut().ok_or("root's first visit is covered")?;
        head.0 = arrival;
    }
    corners.into_iter().map(|(a, d)| a.zip(d).ok_or("outer corner without a neighbor")).collect()
}

/// The whole-graph check: the tree spans every vertex from `root` with the
/// claimed visit intervals, and the arcs nest as the stacks claim. Returns
/// the outer corners in walk order as (arriving from, vertex, leaving to).
pub fn check_planar<V: Ord + Copy>(
    vertices: &BTreeSet<V>,
    proofs: &BTreeMap<(V, V), EdgeProof<V>>,
    root: V,
) -> Result<Vec<(V, V, V)>, &'static str> {
    if !vertices.contains(&root) {
        return Err("root is not a vertex");
    }
    let mut parent_of: BTreeMap<V, V> = BTreeMap::new();
    let mut children: BTreeMap<V, Vec<(u32, V)>> = BTreeMap::new();
    let mut claimed: BTreeMap<V, (u32, u32)> = BTreeMap::new();
    let mut chords = Vec::new();
    for (&(a, b), p) in proofs {
        if a == b || !vertices.contains(&a) || !vertices.contains(&b) {
            return Err("edge outside the graph");
        }
        match *p {
            EdgeProof::Tree { parent, first, last, .. } => {
                let child = if parent == a {
                    b
                } else if parent == b {
                    a
                } else {
                    return Err("tree parent is not on the edge");
                };
                if parent_of.insert(child, parent).is_some() {
                    return Err("two tree parents");
                }
                children.entry(parent).or_default().push((first, child));
                claimed.insert(child, (first, last));
            }
            EdgeProof::CoTree { x, y, above } => chords.push(((a, b), (x, y), above)),
        }
    }
    if parent_of.contains_key(&root) || parent_of.len() + 1 != vertices.len() {
        return Err("tree does not span the graph from its root");
    }
    for list in children.values_mut() {
        list.sort_unstable();
    }

    // Walk the tree, assigning positions.
    let mut owner: Vec<V> = Vec::new();
    let mut interval: BTreeMap<V, (u32, u32)> = BTreeMap::new();
    let mut stack: Vec<(V, usize)> = vec![(root, 0)];
    owner.push(root);
    let mut firsts = BTreeMap::from([(root, 0u32)]);
    while let Some(&mut (u, ref mut i)) = stack.last_mut() {
        let kids = children.get(&u).map(Vec::as_slice).unwrap_or(&[]);
        if let Some(&(_, c)) = kids.get(*i) {
            *i += 1;
            if firsts.contains_key(&c) {
                return Err("tree has a cycle");
            }
            firsts.insert(c, owner.len() as u32);
            owner.push(c);
            stack.push((c, 0));
        } else {
            stack.pop();
            interval.insert(u, (firsts[&u], owner.len() as u32 - 1));
            if let Some(&(p, _)) = stack.last() {
                owner.push(p);
            }
        }
    }
    if interval.len() != vertices.len() {
        return Err("tree does not span the graph from its root");
    }
    for (v, c) in &claimed {
        if interval[v] != *c {
            return Err("visit interval disagrees with the tree");
        }
    }

    let last = owner.len() as u32 - 1;
    let mut opens: BTreeMap<u32, Vec<(Chord, Option<Chord>, V)>> = BTreeMap::new();
    let mut closes: BTreeMap<u32, Vec<(Chord, Option<Chord>, V)>> = BTreeMap::new();
    for ((a, b), (x, y), above) in chords {
        if x >= y || y > last {
            return Err("arc ends out of order");
        }
        let (ox, oy) = (owner[x as usize], owner[y as usize]);
        if !((ox == a && oy == b) || (ox == b && oy == a)) {
            return Err("arc does not end at its edge's vertices");
        }
        opens.entry(x).or_default().push(((x, y), above, oy));
        closes.entry(y).or_default().push(((x, y), above, ox));
    }
    let mut arcs: Vec<Chord> = Vec::new();
    let mut after_pos = Vec::with_capacity(owner.len());
    let mut corners: Vec<(Option<V>, V, Option<V>)> = Vec::new();
    for p in 0..=last {
        let mut arrival = p.checked_sub(1).map(|q| owner[q as usize]);
        let mut cl = closes.remove(&p).unwrap_or_default();
        cl.sort_by_key(|a| Reverse(a.0 .0));
        for (c, above, w) in cl {
            if arcs.pop() != Some(c) || arcs.last().copied() != above {
                return Err("arcs cross");
            }
            arrival = Some(w);
        }
        let uncovered = arcs.is_empty();
        let mut op = opens.remove(&p).unwrap_or_default();
        op.sort_by_key(|a| Reverse(a.0 .1));
        let mut departure = None;
        for (c, above, w) in op {
            if arcs.last().copied() != above {
                return Err("arc opens under the wrong arc");
            }
            departure.get_or_insert(w);
            arcs.push(c);
        }
        let departure = departure.or(owner.get(p as usize + 1).copied());
        if uncovered {
            corners.push((arrival, owner[p as usize], departure));
        }
        after_pos.push(arcs.last().copied());
    }
    for p in proofs.values() {
        if let EdgeProof::Tree { first, last, enter, leave, .. } = *p {
            if after_pos[first as usize - 1] != enter || after_pos[last as usize] != leave {
                return Err("arcs over a tree edge disagree with it");
            }
        }
    }
    if last == 0 {
        return Ok(Vec::new());
    }
    let (arrival, _, _) = corners.pop().expect("the line ends uncovered");
    corners[0].0 = arrival;
    Ok(corners.into_iter().map(|(a, v, d)| (a.unwrap(), v, d.unwrap())).collect())
}
