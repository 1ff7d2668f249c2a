//! The one-round verifier, and the network it runs on.

use super::bits::Bits;
use super::cert::{Certificate, EdgeRecord};
use super::planarity::{check_corners, EdgeProof};
use super::prover::Assignment;
use super::{Reason, Scheme, Verdict};
use crate::graph::{Edge, Graph, VertexId};
use crate::histories::{check_vertex, Avatar, ChainInfo, HistoryCollection, Stages};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

pub(super) type Failure = (Reason, String);

fn fail<T>(reason: Reason, detail: impl Into<String>) -> Result<T, Failure> {
    Err((reason, detail.into()))
}

/// Planar-graph edges over one input edge: (index at the near end, index at
/// the far end, proof).
pub(super) type Images = Vec<(u32, u32, EdgeProof<Avatar>)>;

/// A record's images seen from `near`, after checking they are distinct.
pub(super) fn images_from(host: VertexId, rec: &EdgeRecord, near: VertexId) -> Result<Images, Failure> {
    if rec.images.is_empty() {
        return fail(Reason::Packing, format!("edge {host}-{} has no images", rec.other));
    }
    let pairs: BTreeSet<(u32, u32)> = rec.images.iter().map(|im| (im.here, im.there)).collect();
    if pairs.len() != rec.images.len() {
        return fail(Reason::Packing, format!("edge {host}-{} repeats an image", rec.other));
    }
    Ok(rec
        .images
        .iter()
        .map(|im| if near == host { (im.here, im.there, im.proof) } else { (im.there, im.here, im.proof) })
        .collect())
}

/// The collection restricted to `v`, its neighbors, and the edges at `v`.
pub(super) fn partial_collection(
    v: VertexId,
    me: &Certificate,
    nbrs: &BTreeMap<VertexId, Certificate>,
    links: &BTreeMap<VertexId, Images>,
) -> HistoryCollection {
    let params = me.header.params;
    let mut histories = BTreeMap::from([(v, me.history.clone())]);
    for (&u, c) in nbrs {
        histories.insert(u, c.history.clone());
    }
    let links = links
        .iter()
        .map(|(&u, list)| {
            let e = Edge::new(v, u);
            let mut pairs: Vec<(u32, u32)> =
                list.iter().map(|&(a, b, _)| if e.0 == v { (a, b) } else { (b, a) }).collect();
            pairs.sort_unstable();
            (e, pairs)
        })
        .collect();
    let chains = HistoryCollection::expected_chains(&params)
        .into_iter()
        .zip(&me.chains)
        .map(|(k, f)| (k, ChainInfo { root: f.root, len: f.len }))
        .collect();
    HistoryCollection { params, histories, links, chains, walk: Vec::new() }
}

fn verify(target: Scheme, v: VertexId, own: &Bits, neighbors: &[(VertexId, &Bits)]) -> Result<(), Failure> {
    let me = Certificate::decode(v, own).or_else(|e| fail(Reason::Decode, e.to_string()))?;
    let mut nbrs = BTreeMap::new();
    for &(u, bits) in neighbors {
        let c = Certificate::decode(u, bits).or_else(|e| fail(Reason::Decode, format!("neighbor {u}: {e}")))?;
        if u == v || nbrs.insert(u, c).is_some() {
            return fail(Reason::Packing, "neighbor listed twice");
        }
    }
    if nbrs.values().any(|c| c.header != me.header) {
        return fail(Reason::Header, "headers differ from a neighbor's");
    }
    let params = me.header.params;
    if !target.admits(&params) {
        return fail(Reason::Scheme, format!("certificates claim {}", params.surface()));
    }

    // Records of the edges at v: hosted here, or by the other end.
    let mut links: BTreeMap<VertexId, Images> = BTreeMap::new();
    for rec in &me.hosted {
        if !nbrs.contains_key(&rec.other) {
            return fail(Reason::Packing, format!("record for non-edge {v}-{}", rec.other));
        }
        if links.insert(rec.other, images_from(v, rec, v)?).is_some() {
            return fail(Reason::Packing, format!("two records for {v}-{}", rec.other));
        }
    }
    for (&u, c) in &nbrs {
        for rec in c.hosted.iter().filter(|r| r.other == v) {
            if links.insert(u, images_from(u, rec, v)?).is_some() {
                return fail(Reason::Packing, format!("two records for {v}-{u}"));
            }
        }
        if !links.contains_key(&u) {
            return fail(Reason::Packing, format!("no record for {v}-{u}"));
        }
    }

    let hc = partial_collection(v, &me, &nbrs, &links);
    let st = Stages::new(&hc);
    let ids: Vec<VertexId> = nbrs.keys().copied().collect();
    check_vertex(&hc, &st, v, &ids).or_else(|x| fail(Reason::History(x.clause), x.to_string()))?;

    for (i, f) in me.chains.iter().enumerate() {
        if nbrs.values().any(|c| c.chains[i].root != f.root || c.chains[i].len != f.len) {
            return fail(Reason::Tree, "walk roots differ from a neighbor's");
        }
        if (f.root == v) != (f.dist == 0) {
            return fail(Reason::Tree, "distance zero away from the root");
        }
        let nearest = nbrs.values().map(|c| c.chains[i].dist).min();
        if f.dist != 0 && nearest.and_then(|d| d.checked_add(1)) != Some(f.dist) {
            return fail(Reason::Tree, "distance is not one more than the nearest neighbor's");
        }
    }

    let root = me.header.root;
    let last = me.history.last;
    if root.vertex == v && !(1..=last).contains(&root.index) {
        return fail(Reason::Planarity, "tree root is not an avatar");
    }
    let depth = params.depth();
    let leaves: BTreeMap<u32, _> =
        me.history.walk().into_iter().filter(|x| x.level == depth).map(|x| (x.first, x)).collect();
    for index in 1..=last {
        let a = Avatar { vertex: v, index };
        let incident: Vec<(Avatar, EdgeProof<Avatar>)> = links
            .iter()
            .flat_map(|(&u, list)| {
                list.iter()
                    .filter(move |&&(h, _, _)| h == index)
                    .map(move |&(_, t, p)| (Avatar { vertex: u, index: t }, p))
            })
            .collect();
        let mut corners = check_corners(a, a == root, &incident).or_else(|what| fail(Reason::Planarity, what))?;
        if depth > 0 {
            let mut passes: Vec<(Avatar, Avatar)> = leaves[&index]
                .footprints
                .iter()
                .map(|f| {
                    (
                        Avatar { vertex: f.pred.vertex, index: f.pred.first },
                        Avatar { vertex: f.succ.vertex, index: f.succ.first },
                    )
                })
                .collect();
            passes.sort_unstable();
            corners.sort_unstable();
            if passes != corners {
                return fail(Reason::OuterFace, format!("outer corners of {a} are not its passages"));
            }
        }
    }
    Ok(())
}

/// The decision of vertex `v` from its certificate and its neighbors'.
pub fn verify_node(target: Scheme, v: VertexId, own: &Bits, neighbors: &[(VertexId, &Bits)]) -> Verdict {
    match verify(target, v, own, neighbors) {
        Ok(()) => Verdict::Accept,
        Err((reason, detail)) => Verdict::Reject { reason, detail },
    }
}

/// Every vertex's decision after one synchronous exchange of certificates.
/// Vertices without a certificate hold the empty string.
pub fn run_verifier(g: &Graph, target: Scheme, assignment: &Assignment) -> BTreeMap<VertexId, Verdict> {
    let empty = Bits::new();
    let cert = |v: VertexId| assignment.get(&v).unwrap_or(&empty);
    let vertices: Vec<VertexId> = g.vertices().collect();
    vertices
        .par_iter()
        .map(|&v| {
            let inbox: Vec<(VertexId, &Bits)> = g.neighbors(v).map(|u| (u, cert(u))).collect();
            (v, verify_node(target, v, cert(v), &inbox))
        })
        .collect()
}

pub fn unanimous(verdicts: &BTreeMap<VertexId, Verdict>) -> bool {
    verdicts.values().all(|v| matches!(v, Verdict::Accept))
}
