//! Exhaustive and randomized embedding searches for tiny graphs. These are
//! test oracles, not algorithms meant to scale.

use crate::embedding::EmbeddingScheme;
use crate::graph::{Edge, Graph, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

/// All cyclic orders of `items`, each listed once (the first item is fixed).
pub fn cyclic_orders(items: &[VertexId]) -> Vec<Vec<VertexId>> {
    if items.len() <= 2 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    let mut rest = items[1..].to_vec();
    permute(&mut rest, 0, &mut |p| {
        let mut v = vec![items[0]];
        v.extend_from_slice(p);
        out.push(v);
    });
    out
}

fn permute(xs: &mut Vec<VertexId>, k: usize, f: &mut impl FnMut(&[VertexId])) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, f);
        xs.swap(k, i);
    }
}

/// Number of all-positive rotation systems of `g`.
pub fn rotation_system_count(g: &Graph) -> u128 {
    g.vertices().map(|v| (1..g.degree(v).max(1) as u128).product::<u128>()).product()
}

/// Calls `f` on every all-positive rotation system of `g`.
pub fn for_each_rotation_system(g: &Graph, mut f: impl FnMut(&EmbeddingScheme)) {
    let verts: Vec<VertexId> = g.vertices().collect();
    let choices: Vec<Vec<Vec<VertexId>>> =
        verts.iter().map(|&v| cyclic_orders(&g.neighbors(v).collect::<Vec<_>>())).collect();
    let mut idx = vec![0usize; verts.len()];
    loop {
        let rotation: BTreeMap<VertexId, Vec<VertexId>> =
            verts.iter().zip(&idx).enumerate().map(|(i, (&v, &j))| (v, choices[i][j].clone())).collect();
        let s = EmbeddingScheme::new(rotation, BTreeSet::new()).expect("rotation of a simple graph");
        f(&s);
        let mut i = 0;
        loop {
            if i == verts.len() {
                return;
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Minimum orientable genus together with a witness scheme.
pub fn min_orientable_genus(g: &Graph) -> (u32, EmbeddingScheme) {
    let mut best: Option<(u32, EmbeddingScheme)> = None;
    for_each_rotation_system(g, |s| {
        let k = s.euler_genus().expect("valid scheme").genus;
        if best.as_ref().is_none_or(|(b, _)| k < *b) {
            best = Some((k, s.clone()));
        }
    });
    best.expect("at least one rotation system")
}

/// Randomized local search over signed schemes for one whose Euler
/// characteristic equals `target_chi` and that is non-orientable.
pub fn search_nonorientable<R: Rng>(
    g: &Graph,
    target_chi: i64,
    rng: &mut R,
    restarts: usize,
    steps: usize,
) -> Option<EmbeddingScheme> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let edges: Vec<Edge> = g.edges();
    for _ in 0..restarts {
        let mut rotation: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for &v in &verts {
            let mut r: Vec<VertexId> = g.neighbors(v).collect();
            r.shuffle(rng);
            rotation.insert(v, r);
        }
        let negative: BTreeSet<Edge> = edges.iter().filter(|_| rng.gen_bool(0.5)).copied().collect();
        let mut cur = EmbeddingScheme::new(rotation, negative).ok()?;
        let mut faces = cur.trace_faces().ok()?.len() as i64;
        for _ in 0..steps {
            let mut cand = cur.clone();
            if rng.gen_bool(0.3) {
                let e = edges[rng.gen_range(0..edges.len())];
                let s = cand.sign(e.0, e.1);
                cand.set_sign(e.0, e.1, -s);
            } else {
                let v = verts[rng.gen_range(0..verts.len())];
                let mut r = cand.rotation(v).to_vec();
                if r.len() < 3 {
                    continue;
                }
                let i = rng.gen_range(0..r.len());
                let j = rng.gen_range(0..r.len());
                r.swap(i, j);
                let mut rot = cand.rotations().clone();
                rot.insert(v, r);
                cand = EmbeddingScheme::new(rot, cand.negative_edges().clone()).ok()?;
            }
            let f = cand.trace_faces().ok()?.len() as i64;
            if f >= faces || rng.gen_bool(0.02) {
                cur = cand;
                faces = f;
            }
            let chi = g.n() as i64 - g.m() as i64 + faces;
            if chi == target_chi && cur.orienting_switches().is_none() {
                return Some(cur);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn counts_match_factorials() {
        assert_eq!(cyclic_orders(&[1, 2, 3, 4]).len(), 6);
        assert_eq!(rotation_system_count(&families::complete(5)), 7776);
        assert_eq!(rotation_system_count(&families::complete_bipartite(3, 3)), 64);
    }

    #[test]
    fn small_genera() {
        assert_eq!(min_orientable_genus(&families::complete(4)).0, 0);
        assert_eq!(min_orientable_genus(&families::complete_bipartite(3, 3)).0, 1);
    }
}
