//! The honest prover.

use super::bits::{width_for, Bits};
use super::cert::{Certificate, ChainFragment, EdgeRecord, EncodeError, Header, Image};
use super::planarity::{prove_planar, EdgeProof};
use super::Scheme;
use crate::embedding::{cyclic_eq, EmbeddingScheme};
use crate::graph::{degeneracy_order, Edge, Graph, VertexId};
use crate::histories::{build_histories, Avatar, Genealogy, HistoryCollection, HistoryError, HistoryNode};
use crate::surgery::{unfold, SurgeryError, UnfoldingTrace};
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

/// Certificates by vertex.
pub type Assignment = BTreeMap<VertexId, Bits>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProveError {
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    History(#[from] HistoryError),
    #[error("embedding has {found}, beyond what the scheme certifies")]
    BeyondScheme { found: String },
    #[error("unfolded graph is not plane with its special face outside")]
    NotPlane,
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

pub fn bfs_distances(g: &Graph, root: VertexId) -> BTreeMap<VertexId, u32> {
    let mut dist = BTreeMap::from([(root, 0)]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for w in g.neighbors(v) {
            dist.entry(w).or_insert_with(|| {
                queue.push_back(w);
                d + 1
            });
        }
    }
    dist
}

/// The endpoint that carries each edge's record: the one removed first in
/// a degeneracy order, so no vertex carries more than the degeneracy.
pub fn hosts(g: &Graph) -> BTreeMap<Edge, VertexId> {
    let (order, _) = degeneracy_order(g);
    let rank: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    g.edges().into_iter().map(|e| (e, if rank[&e.0] < rank[&e.1] { e.0 } else { e.1 })).collect()
}

/// The unfolded graph with vertices named by avatars, oriented so that the
/// special walk is traced in the rotation's direction.
fn avatar_rotation(trace: &UnfoldingTrace, walk: &[Avatar]) -> Result<BTreeMap<Avatar, Vec<Avatar>>, ProveError> {
    let gen = Genealogy::of(trace);
    let plane = trace.unfolded().normalized_orientable().ok_or(ProveError::NotPlane)?;
    let back: BTreeMap<Avatar, VertexId> = plane.vertices().map(|x| (gen.avatar(x).unwrap(), x)).collect();
    let candidates = [plane.clone(), plane.mirrored()];
    let chosen = match walk {
        [] => &candidates[0],
        [.., last] => candidates
            .iter()
            .find(|s| {
                let c = s.corner_after(back[&walk[0]], back[last]);
                s.trace_from(c)
                    .map(|w| {
                        let seq: Vec<Avatar> = w.vertices().iter().map(|&x| gen.avatar(x).unwrap()).collect();
                        cyclic_eq(&seq, walk)
                    })
                    .unwrap_or(false)
            })
            .ok_or(ProveError::NotPlane)?,
    };
    Ok(chosen
        .rotations()
        .iter()
        .map(|(&x, rot)| (gen.avatar(x).unwrap(), rot.iter().map(|&y| gen.avatar(y).unwrap()).collect()))
        .collect())
}

/// Everything the prover decides, before it is laid out in bits.
pub fn prove_certificates(
    scheme: &EmbeddingScheme,
    target: Scheme,
) -> Result<BTreeMap<VertexId, Certificate>, ProveError> {
    let trace = unfold(scheme)?;
    if !target.admits(&trace.params) {
        return Err(ProveError::BeyondScheme { found: trace.params.surface().to_string() });
    }
    let hc = build_histories(&trace)?;
    let g = scheme.graph();
    certificates_for(&g, &trace, &hc)
}

pub fn certificates_for(
    g: &Graph,
    trace: &UnfoldingTrace,
    hc: &HistoryCollection,
) -> Result<BTreeMap<VertexId, Certificate>, ProveError> {
    let rotation = avatar_rotation(trace, &hc.walk)?;
    let (root, after) = match hc.walk.as_slice() {
        [first, .., last] => (*first, *last),
        _ => {
            let root = *rotation.keys().next().expect("graph has a vertex");
            (root, rotation[&root].first().copied().unwrap_or(root))
        }
    };
    let proofs = prove_planar(&rotation, root, after).map_err(|_| ProveError::NotPlane)?;

    let keys = HistoryCollection::expected_chains(&hc.params);
    let mut dists = BTreeMap::new();
    for key in &keys {
        let r = hc.chains[key].root;
        dists.entry(r).or_insert_with(|| bfs_distances(g, r));
    }

    let mut hosted: BTreeMap<VertexId, Vec<EdgeRecord>> = BTreeMap::new();
    for (e, host) in hosts(g) {
        let other = e.other(host);
        let images = hc.links[&e]
            .iter()
            .map(|&(a, b)| {
                let (here, there) = if host == e.0 { (a, b) } else { (b, a) };
                let x = Avatar { vertex: e.0, index: a };
                let y = Avatar { vertex: e.1, index: b };
                let proof = proofs[&if x < y { (x, y) } else { (y, x) }];
                Image { here, there, proof }
            })
            .collect();
        hosted.entry(host).or_default().push(EdgeRecord { other, images });
    }

    let mut widest = g.n() as u64 * g.n() as u64 - 1;
    widest = widest.max(g.vertices().max().unwrap_or(0).into());
    for p in proofs.values() {
        let far = match *p {
            EdgeProof::Tree { last, .. } => last,
            EdgeProof::CoTree { y, .. } => y,
        };
        widest = widest.max(far.into());
    }
    for info in hc.chains.values() {
        widest = widest.max(info.len.into());
    }
    let width = width_for(widest);

    let header = Header { width, params: hc.params, root };
    Ok(hc
        .histories
        .iter()
        .map(|(&v, history)| {
            let chains = keys
                .iter()
                .map(|k| {
                    let info = hc.chains[k];
                    ChainFragment { root: info.root, len: info.len, dist: dists[&info.root][&v] }
                })
                .collect();
            let mut history = history.clone();
            sort_footprints(&mut history);
            let cert = Certificate { header, history, chains, hosted: hosted.remove(&v).unwrap_or_default() };
            (v, cert)
        })
        .collect())
}

pub fn encode_all(certs: &BTreeMap<VertexId, Certificate>) -> Result<Assignment, EncodeError> {
    certs.iter().map(|(&v, c)| Ok((v, c.encode()?))).collect()
}

fn sort_footprints(x: &mut HistoryNode) {
    x.footprints.sort_unstable();
    x.children.iter_mut().for_each(sort_footprints);
}

/// Certificates for an embedded graph under the given scheme.
pub fn prove(scheme: &EmbeddingScheme, target: Scheme) -> Result<Assignment, ProveError> {
    Ok(encode_all(&prove_certificates(scheme, target)?)?)
}
