//! A dishonest prover: corrupted assignments, and campaigns running them
//! through both verifiers.

use super::bits::Bits;
use super::cert::{Certificate, EdgeRecord, Image};
use super::planarity::{Chord, EdgeProof};
use super::prover::{bfs_distances, Assignment};
use super::{check_centrally, run_verifier, unanimous, Scheme};
use crate::graph::{Graph, VertexId};
use crate::histories::mutate::reverse_walk;
use crate::histories::{Avatar, ChainInfo, HistoryCollection, HistoryNode};
use crate::surgery::FaceLabel;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    BitFlip,
    FootprintSwap,
    ChainReversal,
    DistanceCorruption,
    RootFork,
    AvatarRelabel,
    PayloadDrop,
    WalkSplice,
}

impl Operator {
    pub const ALL: [Operator; 8] = [
        Operator::BitFlip,
        Operator::FootprintSwap,
        Operator::ChainReversal,
        Operator::DistanceCorruption,
        Operator::RootFork,
        Operator::AvatarRelabel,
        Operator::PayloadDrop,
        Operator::WalkSplice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::BitFlip => "bit-flip",
            Operator::FootprintSwap => "footprint-swap",
            Operator::ChainReversal => "chain-reversal",
            Operator::DistanceCorruption => "distance-corruption",
            Operator::RootFork => "root-fork",
            Operator::AvatarRelabel => "avatar-relabel",
            Operator::PayloadDrop => "payload-drop",
            Operator::WalkSplice => "walk-splice",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

type Certs = BTreeMap<VertexId, Certificate>;

fn decode_all(a: &Assignment) -> Option<Certs> {
    a.iter().map(|(&v, b)| Certificate::decode(v, b).ok().map(|c| (v, c))).collect()
}

fn encode_into(certs: &Certs, base: &Assignment) -> Option<Assignment> {
    let mut out = base.clone();
    for (&v, c) in certs {
        out.insert(v, c.encode().ok()?);
    }
    Some(out)
}

/// (vertex, preorder node index, footprint index) of every footprint at
/// `level`, or at any level when `None`.
fn footprint_slots(certs: &Certs, level: Option<usize>) -> Vec<(VertexId, usize, usize)> {
    let mut out = Vec::new();
    for (&v, c) in certs {
        for (i, x) in c.history.walk().into_iter().enumerate() {
            if level.is_none_or(|l| x.level == l) {
                out.extend((0..x.footprints.len()).map(|j| (v, i, j)));
            }
        }
    }
    out
}

fn nth_mut<'a>(x: &'a mut HistoryNode, i: &mut usize) -> Option<&'a mut HistoryNode> {
    if *i == 0 {
        return Some(x);
    }
    *i -= 1;
    for c in &mut x.children {
        if let Some(n) = nth_mut(c, i) {
            return Some(n);
        }
    }
    None
}

/// The `i`-th node of the history in preorder.
fn node_at(c: &mut Certificate, mut i: usize) -> &mut HistoryNode {
    nth_mut(&mut c.history, &mut i).expect("slot taken from this history")
}

fn as_collection(certs: &Certs) -> HistoryCollection {
    let any = certs.values().next().expect("graph has a vertex");
    let params = any.header.params;
    HistoryCollection {
        params,
        histories: certs.iter().map(|(&v, c)| (v, c.history.clone())).collect(),
        links: BTreeMap::new(),
        chains: HistoryCollection::expected_chains(&params)
            .into_iter()
            .zip(&any.chains)
            .map(|(k, f)| (k, ChainInfo { root: f.root, len: f.len }))
            .collect(),
        walk: Vec::new(),
    }
}

/// Runs `face` at `level` backwards in every certificate. `None` when no
/// certificate has that chain.
pub fn reverse_chain(a: &Assignment, level: usize, face: FaceLabel) -> Option<Assignment> {
    let mut certs = decode_all(a)?;
    let mut hc = as_collection(&certs);
    reverse_walk(&mut hc, level, face);
    for (v, h) in hc.histories {
        certs.get_mut(&v)?.history = h;
    }
    encode_into(&certs, a).filter(|m| m != a)
}

/// The orientation flip that would pass a Klein bottle off as a torus: the
/// right copy of the first duplicated cycle, read the other way round.
pub fn klein_attack(a: &Assignment) -> Option<Assignment> {
    reverse_chain(a, 1, FaceLabel::CycleRight(1))
}

/// One corrupted assignment, or `None` when the operator has nothing to act
/// on here. The result may coincide with the input.
pub fn mutate<R: Rng>(g: &Graph, a: &Assignment, op: Operator, rng: &mut R) -> Option<Assignment> {
    let vertices: Vec<VertexId> = a.keys().copied().collect();
    if op == Operator::BitFlip {
        let v = *vertices.choose(rng)?;
        let mut bits = a[&v].clone();
        if bits.is_empty() {
            return None;
        }
        let i = rng.gen_range(0..bits.len());
        let b = !bits[i];
        bits.set(i, b);
        let mut out = a.clone();
        out.insert(v, bits);
        return Some(out);
    }
    let mut certs = decode_all(a)?;
    let chain_count = certs.values().next()?.chains.len();
    let depth = certs.values().next()?.header.params.depth();
    match op {
        Operator::BitFlip => unreachable!(),
        Operator::FootprintSwap => {
            let level = rng.gen_range(0..=depth);
            let slots = footprint_slots(&certs, Some(level));
            if slots.len() < 2 {
                return None;
            }
            let s: Vec<_> = slots.choose_multiple(rng, 2).copied().collect();
            let (v1, n1, j1) = s[0];
            let (v2, n2, j2) = s[1];
            let f1 = node_at(certs.get_mut(&v1)?, n1).footprints[j1];
            let f2 = node_at(certs.get_mut(&v2)?, n2).footprints[j2];
            if rng.gen_bool(0.5) {
                node_at(certs.get_mut(&v1)?, n1).footprints[j1].counter = f2.counter;
                node_at(certs.get_mut(&v2)?, n2).footprints[j2].counter = f1.counter;
            } else {
                node_at(certs.get_mut(&v1)?, n1).footprints[j1] = f2;
                node_at(certs.get_mut(&v2)?, n2).footprints[j2] = f1;
            }
            // Keep the listing canonical so the swap is judged on content.
            node_at(certs.get_mut(&v1)?, n1).footprints.sort_unstable();
            node_at(certs.get_mut(&v2)?, n2).footprints.sort_unstable();
        }
        Operator::ChainReversal => {
            let keys = HistoryCollection::expected_chains(&certs.values().next()?.header.params);
            let &(level, face) = keys.choose(rng)?;
            return reverse_chain(a, level, face);
        }
        Operator::DistanceCorruption => {
            if chain_count == 0 {
                return None;
            }
            let i = rng.gen_range(0..chain_count);
            let v = *vertices.choose(rng)?;
            let f = &mut certs.get_mut(&v)?.chains[i];
            f.dist = if f.dist == 0 || rng.gen_bool(0.5) { f.dist + 1 } else { f.dist - 1 };
        }
        Operator::RootFork => {
            if chain_count == 0 {
                return None;
            }
            let i = rng.gen_range(0..chain_count);
            let old = certs.values().next()?.chains[i].root;
            let fork = *vertices.iter().filter(|&&v| v != old).collect::<Vec<_>>().choose(rng)?;
            let dist = bfs_distances(g, *fork);
            let reach = *dist.values().max()?;
            let radius = rng.gen_range(0..=reach / 2);
            for (v, c) in certs.iter_mut() {
                if dist[v] <= radius {
                    c.chains[i].root = *fork;
                    c.chains[i].dist = dist[v];
                }
            }
        }
        Operator::AvatarRelabel => {
            let hosts: Vec<VertexId> = certs.iter().filter(|(_, c)| !c.hosted.is_empty()).map(|(&v, _)| v).collect();
            let v = *hosts.choose(rng)?;
            let other_last = |u: VertexId, certs: &Certs| certs.get(&u).map_or(1, |c| c.history.last);
            let c = &certs[&v];
            let r = rng.gen_range(0..c.hosted.len());
            let rec = &c.hosted[r];
            let k = rng.gen_range(0..rec.images.len());
            let near = rng.gen_bool(0.5);
            let last = if near { c.history.last } else { other_last(rec.other, &certs) };
            if last < 2 {
                return None;
            }
            let im = &mut certs.get_mut(&v)?.hosted[r].images[k];
            let slot = if near { &mut im.here } else { &mut im.there };
            *slot = (*slot % last) + 1;
        }
        Operator::PayloadDrop => {
            let v = *vertices.choose(rng)?;
            let c = certs.get_mut(&v)?;
            match rng.gen_range(0..3) {
                0 => {
                    let mut out = a.clone();
                    out.insert(v, Bits::new());
                    return Some(out);
                }
                1 if !c.hosted.is_empty() => {
                    let r = rng.gen_range(0..c.hosted.len());
                    c.hosted.remove(r);
                }
                _ => {
                    let slots = footprint_slots(&certs, None);
                    let &(u, n, j) = slots.choose(rng)?;
                    node_at(certs.get_mut(&u)?, n).footprints.remove(j);
                }
            }
        }
        Operator::WalkSplice => {
            if depth == 0 {
                return None;
            }
            // Send one passage of the final walk along another planar edge.
            let slots = footprint_slots(&certs, Some(depth));
            let &(v, n, j) = slots.choose(rng)?;
            let here = node_at(certs.get_mut(&v)?, n).first;
            let mut targets = Vec::new();
            for (&host, c) in &certs {
                for rec in &c.hosted {
                    for im in &rec.images {
                        if host == v && im.here == here {
                            targets.push((rec.other, im.there));
                        } else if rec.other == v && im.there == here {
                            targets.push((host, im.here));
                        }
                    }
                }
            }
            let f = &mut node_at(certs.get_mut(&v)?, n).footprints[j];
            targets.retain(|&(u, i)| (u, i) != (f.succ.vertex, f.succ.first));
            let &(u, i) = targets.choose(rng)?;
            f.succ.vertex = u;
            f.succ.first = i;
        }
    }
    encode_into(&certs, a)
}

/// Outcome of one corrupted assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trial {
    pub operator: Operator,
    pub rejected: bool,
    pub central_rejected: bool,
    /// A vertex that rejected, and why.
    pub rejecter: Option<(VertexId, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Campaign {
    pub trials: Vec<Trial>,
}

impl Campaign {
    pub fn rejected(&self) -> usize {
        self.trials.iter().filter(|t| t.rejected).count()
    }

    pub fn disagreements(&self) -> usize {
        self.trials.iter().filter(|t| t.rejected != t.central_rejected).count()
    }

    pub fn by_operator(&self) -> BTreeMap<Operator, (usize, usize)> {
        let mut out = BTreeMap::new();
        for t in &self.trials {
            let e = out.entry(t.operator).or_insert((0, 0));
            e.0 += 1;
            e.1 += usize::from(t.rejected);
        }
        out
    }
}

/// Runs one corrupted assignment through both verifiers.
pub fn trial(g: &Graph, target: Scheme, operator: Operator, a: &Assignment) -> Trial {
    let verdicts = run_verifier(g, target, a);
    let rejecter = verdicts.iter().find(|(_, v)| !v.accepted()).map(|(&v, x)| (v, x.to_string()));
    Trial {
        operator,
        rejected: !unanimous(&verdicts),
        central_rejected: check_centrally(g, target, a).is_err(),
        rejecter,
    }
}

/// `count` corrupted assignments, cycling through the operators, each
/// different from the honest one. Deterministic in `seed`.
pub fn campaign(g: &Graph, target: Scheme, honest: &Assignment, count: usize, seed: u64) -> Campaign {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mutants = Vec::with_capacity(count);
    let mut turn = 0usize;
    let mut misses = 0;
    while mutants.len() < count && misses < 100 * (count + 1) {
        let op = Operator::ALL[turn % Operator::ALL.len()];
        turn += 1;
        match mutate(g, honest, op, &mut rng) {
            Some(m) if m != *honest => mutants.push((op, m)),
            _ => misses += 1,
        }
    }
    let trials = mutants.par_iter().map(|(op, m)| trial(g, target, *op, m)).collect();
    Campaign { trials }
}

fn random_chord<R: Rng>(span: u32, rng: &mut R) -> Option<Chord> {
    rng.gen_bool(0.7).then(|| {
        let x = rng.gen_range(0..span);
        (x, rng.gen_range(x..=span))
    })
}

fn random_proof<R: Rng>(parent: Avatar, span: u32, rng: &mut R) -> EdgeProof<Avatar> {
    if rng.gen_bool(0.5) {
        let first = rng.gen_range(0..span);
        EdgeProof::Tree {
            parent,
            first,
            last: rng.gen_range(first..=span),
            enter: random_chord(span, rng),
            leave: random_chord(span, rng),
        }
    } else {
        let x = rng.gen_range(0..span);
        EdgeProof::CoTree { x, y: rng.gen_range(x..=span), above: random_chord(span, rng) }
    }
}

/// Certificates for `base` plus an edge `host`-`other` it does not cover,
/// with made-up proof data for the new edge. Half the time one of the
/// existing proofs is redrawn as well.
pub fn graft_edge<R: Rng>(base: &Assignment, host: VertexId, other: VertexId, rng: &mut R) -> Option<Assignment> {
    let mut certs = decode_all(base)?;
    let span = 2 * certs.len() as u32 + 2;
    let here = rng.gen_range(1..=certs.get(&host)?.history.last);
    let there = rng.gen_range(1..=certs.get(&other)?.history.last);
    let parent =
        if rng.gen_bool(0.5) { Avatar { vertex: host, index: here } } else { Avatar { vertex: other, index: there } };
    let proof = random_proof(parent, span, rng);
    certs.get_mut(&host)?.hosted.push(EdgeRecord { other, images: vec![Image { here, there, proof }] });
    if rng.gen_bool(0.5) {
        let hosts: Vec<VertexId> = certs.iter().filter(|(_, c)| !c.hosted.is_empty()).map(|(&v, _)| v).collect();
        let &v = hosts.choose(rng)?;
        let c = certs.get_mut(&v)?;
        let r = rng.gen_range(0..c.hosted.len());
        let rec = &mut c.hosted[r];
        let k = rng.gen_range(0..rec.images.len());
        let im = &mut rec.images[k];
        let parent = if rng.gen_bool(0.5) {
            Avatar { vertex: v, index: im.here }
        } else {
            Avatar { vertex: rec.other, index: im.there }
        };
        im.proof = random_proof(parent, span, rng);
    }
    encode_into(&certs, base)
}

/// Tour positions of every co-tree edge, for tests that tamper with the
/// planarity proof directly.
pub fn chords(a: &Assignment) -> Vec<(VertexId, usize, usize, (u32, u32))> {
    let mut out = Vec::new();
    for (&v, bits) in a {
        let Ok(c) = Certificate::decode(v, bits) else { continue };
        for (r, rec) in c.hosted.iter().enumerate() {
            for (k, im) in rec.images.iter().enumerate() {
                if let EdgeProof::CoTree { x, y, .. } = im.proof {
                    out.push((v, r, k, (x, y)));
                }
            }
        }
    }
    out
}
