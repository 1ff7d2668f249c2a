//! The same decision taken with the whole assignment in view: decode
//! everything, assemble the histories, and run each sub-scheme's global
//! checker.

use super::cert::Certificate;
use super::planarity::{check_planar, EdgeProof};
use super::prover::{bfs_distances, Assignment};
use super::verifier::{images_from, Failure};
use super::{Reason, Scheme};
use crate::graph::{Edge, Graph};
use crate::histories::{check_local_consistency, Avatar, ChainInfo, HistoryCollection};
use std::collections::{BTreeMap, BTreeSet};

fn fail<T>(reason: Reason, detail: impl Into<String>) -> Result<T, Failure> {
    Err((reason, detail.into()))
}

pub fn check_centrally(g: &Graph, target: Scheme, assignment: &Assignment) -> Result<(), Failure> {
    let mut certs = BTreeMap::new();
    for v in g.vertices() {
        let bits = assignment.get(&v).cloned().unwrap_or_default();
        let c = Certificate::decode(v, &bits).or_else(|e| fail(Reason::Decode, format!("{v}: {e}")))?;
        certs.insert(v, c);
    }
    let header = certs.values().next().ok_or((Reason::Decode, "empty graph".to_string()))?.header;
    if certs.values().any(|c| c.header != header) {
        return fail(Reason::Header, "headers differ");
    }
    let params = header.params;
    if !target.admits(&params) {
        return fail(Reason::Scheme, format!("certificates claim {}", params.surface()));
    }

    let mut links: BTreeMap<Edge, Vec<(u32, u32)>> = BTreeMap::new();
    let mut proofs: BTreeMap<(Avatar, Avatar), EdgeProof<Avatar>> = BTreeMap::new();
    for (&v, c) in &certs {
        for rec in &c.hosted {
            if !g.neighbors(v).any(|u| u == rec.other) {
                return fail(Reason::Packing, format!("record for non-edge {v}-{}", rec.other));
            }
            let e = Edge::new(v, rec.other);
            let images = images_from(v, rec, e.0)?;
            if links.contains_key(&e) {
                return fail(Reason::Packing, format!("two records for {}-{}", e.0, e.1));
            }
            links.insert(e, images.iter().map(|&(a, b, _)| (a, b)).collect());
            for (a, b, p) in images {
                proofs.insert((Avatar { vertex: e.0, index: a }, Avatar { vertex: e.1, index: b }), p);
            }
        }
    }
    if links.len() != g.m() {
        return fail(Reason::Packing, "some edge has no record");
    }

    let keys = HistoryCollection::expected_chains(&params);
    let mut chains = BTreeMap::new();
    for (i, key) in keys.iter().enumerate() {
        let f = certs.values().next().unwrap().chains[i];
        if certs.values().any(|c| c.chains[i].root != f.root || c.chains[i].len != f.len) {
            return fail(Reason::Tree, "walk roots differ");
        }
        if !g.has_vertex(f.root) {
            return fail(Reason::Tree, "walk root is not a vertex");
        }
        let dist = bfs_distances(g, f.root);
        if certs.iter().any(|(v, c)| dist.get(v) != Some(&c.chains[i].dist)) {
            return fail(Reason::Tree, "distances are not the distances to the root");
        }
        chains.insert(*key, ChainInfo { root: f.root, len: f.len });
    }

    let avatars: BTreeSet<Avatar> =
        certs.iter().flat_map(|(&v, c)| (1..=c.history.last).map(move |index| Avatar { vertex: v, index })).collect();
    let corners = check_planar(&avatars, &proofs, header.root).or_else(|what| fail(Reason::Planarity, what))?;

    let hc = HistoryCollection {
        params,
        histories: certs.into_iter().map(|(v, c)| (v, c.history)).collect(),
        links,
        chains,
        walk: if params.depth() > 0 { corners.into_iter().map(|(_, x, _)| x).collect() } else { Vec::new() },
    };
    let report = check_local_consistency(g, &hc);
    match report.violations.first() {
        None => Ok(()),
        Some(x) => fail(Reason::History(x.clause), x.to_string()),
    }
}
