//! Certificates and their canonical bit layout.
//!
//! Everything that grows with the graph is a `width`-bit word (vertex ids,
//! walk positions and lengths, distances, tour positions). Avatar indices
//! use `small` bits, enough for the `2^depth` avatars a vertex can have.
//! Counts and flags have fixed widths. Decoding is strict: a bit string is
//! only accepted if re-encoding what was read gives it back.

use super::bits::{width_for, Bits, Reader, Truncated, Writer};
use super::planarity::{Chord, EdgeProof};
use crate::graph::VertexId;
use crate::histories::{Avatar, EdgeType, Footprint, HistoryCollection, HistoryNode, StageVertex};
use crate::surgery::Params;
use thiserror::Error;

const WIDTH_BITS: u32 = 6;
const GENUS_BITS: u32 = 6;
const COUNT_BITS: u32 = 6;
const TYPE_INDEX_BITS: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub width: u32,
    pub params: Params,
    /// Root of the planarity tree.
    pub root: Avatar,
}

impl Header {
    pub fn small(&self) -> u32 {
        small_width(&self.params)
    }
}

pub fn small_width(p: &Params) -> u32 {
    width_for(1u64 << p.depth().min(40))
}

/// One vertex's share of the tree proving a special walk has a single start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainFragment {
    pub root: VertexId,
    pub len: u32,
    /// Distance to `root` in the input graph.
    pub dist: u32,
}

/// A planar-graph edge over a hosted edge, seen from the host.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Image {
    pub here: u32,
    pub there: u32,
    pub proof: EdgeProof<Avatar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub other: VertexId,
    pub images: Vec<Image>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub header: Header,
    pub history: HistoryNode,
    /// One per walk, in [`HistoryCollection::expected_chains`] order.
    pub chains: Vec<ChainFragment>,
    pub hosted: Vec<EdgeRecord>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("certificate ends early")]
    Truncated,
    #[error("field out of range: {0}")]
    Range(&'static str),
    #[error("certificate is not in canonical form")]
    NonCanonical,
}

impl From<Truncated> for DecodeError {
    fn from(_: Truncated) -> Self {
        DecodeError::Truncated
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{what} does not fit the fixed layout")]
pub struct EncodeError {
    pub what: &'static str,
}

fn fits(w: &mut Writer, value: u64, width: u32, what: &'static str) -> Result<(), EncodeError> {
    if width < 64 && value >> width != 0 {
        return Err(EncodeError { what });
    }
    w.put(value, width);
    Ok(())
}

fn type_code(t: EdgeType) -> (u64, u32) {
    match t {
        EdgeType::CycleLeft(i) => (0, i),
        EdgeType::CycleRight(i) => (1, i),
        EdgeType::PathLeft(i) => (2, i),
        EdgeType::PathRight(i) => (3, i),
        EdgeType::Doubled(i) => (4, i),
    }
}

fn type_of(code: u64, i: u32) -> Result<EdgeType, DecodeError> {
    Ok(match code {
        0 => EdgeType::CycleLeft(i),
        1 => EdgeType::CycleRight(i),
        2 => EdgeType::PathLeft(i),
        3 => EdgeType::PathRight(i),
        4 => EdgeType::Doubled(i),
        _ => return Err(DecodeError::Range("edge type")),
    })
}

struct Layout {
    width: u32,
    small: u32,
}

impl Layout {
    fn word(&self, w: &mut Writer, v: u64, what: &'static str) -> Result<(), EncodeError> {
        fits(w, v, self.width, what)
    }

    fn stage_vertex(&self, w: &mut Writer, x: StageVertex) -> Result<(), EncodeError> {
        self.word(w, x.vertex.into(), "vertex id")?;
        fits(w, x.first.into(), self.small, "avatar index")
    }

    fn edge_type(&self, w: &mut Writer, t: EdgeType) -> Result<(), EncodeError> {
        let (code, i) = type_code(t);
        w.put(code, 3);
        fits(w, i.into(), TYPE_INDEX_BITS, "step index")
    }

    fn chord(&self, w: &mut Writer, c: Option<Chord>) -> Result<(), EncodeError> {
        w.flag(c.is_some());
        if let Some((x, y)) = c {
            self.word(w, x.into(), "tour position")?;
            self.word(w, y.into(), "tour position")?;
        }
        Ok(())
    }

    fn node(&self, w: &mut Writer, x: &HistoryNode) -> Result<(), EncodeError> {
        w.put(x.children.len() as u64, 2);
        fits(w, x.footprints.len() as u64, COUNT_BITS, "footprint count")?;
        for f in &x.footprints {
            self.stage_vertex(w, f.pred)?;
            self.stage_vertex(w, f.succ)?;
            self.edge_type(w, f.type_in)?;
            self.edge_type(w, f.type_out)?;
            self.word(w, f.counter.into(), "walk position")?;
        }
        for c in &x.children {
            self.node(w, c)?;
        }
        Ok(())
    }

    fn read_vertex(&self, r: &mut Reader<'_>) -> Result<VertexId, DecodeError> {
        VertexId::try_from(r.get(self.width)?).map_err(|_| DecodeError::Range("vertex id"))
    }

    fn read_u32(&self, r: &mut Reader<'_>, width: u32, what: &'static str) -> Result<u32, DecodeError> {
        u32::try_from(r.get(width)?).map_err(|_| DecodeError::Range(what))
    }

    fn read_stage_vertex(&self, r: &mut Reader<'_>) -> Result<StageVertex, DecodeError> {
        Ok(StageVertex { vertex: self.read_vertex(r)?, first: self.read_u32(r, self.small, "avatar index")? })
    }

    fn read_type(&self, r: &mut Reader<'_>) -> Result<EdgeType, DecodeError> {
        let code = r.get(3)?;
        type_of(code, self.read_u32(r, TYPE_INDEX_BITS, "step index")?)
    }

    fn read_chord(&self, r: &mut Reader<'_>) -> Result<Option<Chord>, DecodeError> {
        if !r.flag()? {
            return Ok(None);
        }
        let x = self.read_u32(r, self.width, "tour position")?;
        let y = self.read_u32(r, self.width, "tour position")?;
        Ok(Some((x, y)))
    }

    /// Reads a node at `level`, numbering avatars from `*next`.
    fn read_node(
        &self,
        r: &mut Reader<'_>,
        level: usize,
        depth: usize,
        next: &mut u32,
    ) -> Result<HistoryNode, DecodeError> {
        let kids = r.get(2)?;
        if kids > 2 || (level == depth && kids != 0) {
            return Err(DecodeError::Range("history shape"));
        }
        let count = r.get(COUNT_BITS)?;
        let mut footprints = Vec::with_capacity(count as usize);
        for _ in 0..count {
            footprints.push(Footprint {
                pred: self.read_stage_vertex(r)?,
                succ: self.read_stage_vertex(r)?,
                type_in: self.read_type(r)?,
                type_out: self.read_type(r)?,
                counter: self.read_u32(r, self.width, "walk position")?,
            });
        }
        // A node's footprints are a set; only the sorted listing is valid.
        if footprints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DecodeError::NonCanonical);
        }
        let first = *next;
        let mut children = Vec::new();
        if level == depth {
            *next += 1;
        } else {
            for _ in 0..kids {
                children.push(self.read_node(r, level + 1, depth, next)?);
            }
        }
        Ok(HistoryNode { level, first, last: *next - 1, footprints, children })
    }
}

impl Certificate {
    pub fn encode(&self) -> Result<Bits, EncodeError> {
        let h = &self.header;
        let lay = Layout { width: h.width, small: h.small() };
        let mut w = Writer::default();
        if h.width == 0 || h.width >> WIDTH_BITS != 0 {
            return Err(EncodeError { what: "word width" });
        }
        w.put(h.width.into(), WIDTH_BITS);
        w.flag(h.params.orientable);
        fits(&mut w, h.params.genus.into(), GENUS_BITS, "genus")?;
        fits(&mut w, h.params.doublings.into(), GENUS_BITS, "doublings")?;
        lay.word(&mut w, h.root.vertex.into(), "vertex id")?;
        fits(&mut w, h.root.index.into(), lay.small, "avatar index")?;

        lay.node(&mut w, &self.history)?;
        for c in &self.chains {
            lay.word(&mut w, c.root.into(), "vertex id")?;
            lay.word(&mut w, c.len.into(), "walk length")?;
            lay.word(&mut w, c.dist.into(), "distance")?;
        }
        fits(&mut w, self.hosted.len() as u64, COUNT_BITS, "hosted edge count")?;
        for rec in &self.hosted {
            lay.word(&mut w, rec.other.into(), "vertex id")?;
            fits(&mut w, rec.images.len() as u64, lay.small, "image count")?;
            for im in &rec.images {
                fits(&mut w, im.here.into(), lay.small, "avatar index")?;
                fits(&mut w, im.there.into(), lay.small, "avatar index")?;
                match im.proof {
                    EdgeProof::Tree { parent, first, last, enter, leave } => {
                        w.flag(true);
                        w.flag(parent.vertex != rec.other);
                        lay.word(&mut w, first.into(), "tour position")?;
                        lay.word(&mut w, last.into(), "tour position")?;
                        lay.chord(&mut w, enter)?;
                        lay.chord(&mut w, leave)?;
                    }
                    EdgeProof::CoTree { x, y, above } => {
                        w.flag(false);
                        lay.word(&mut w, x.into(), "tour position")?;
                        lay.word(&mut w, y.into(), "tour position")?;
                        lay.chord(&mut w, above)?;
                    }
                }
            }
        }
        Ok(w.bits)
    }

    /// Reads the certificate held by vertex `owner`.
    pub fn decode(owner: VertexId, bits: &Bits) -> Result<Certificate, DecodeError> {
        let mut r = Reader::new(bits);
        let width = r.get(WIDTH_BITS)? as u32;
        if width == 0 {
            return Err(DecodeError::Range("word width"));
        }
        let orientable = r.flag()?;
        let genus = r.get(GENUS_BITS)? as u32;
        let doublings = r.get(GENUS_BITS)? as u32;
        let params = if orientable { Params::orientable(genus) } else { Params::non_orientable(genus, doublings) };
        if params.doublings != doublings || !params.is_consistent() {
            return Err(DecodeError::Range("surface parameters"));
        }
        let mut lay = Layout { width, small: 0 };
        let root_vertex = lay.read_vertex(&mut r)?;
        let small = small_width(&params);
        lay.small = small;
        let root = Avatar { vertex: root_vertex, index: lay.read_u32(&mut r, small, "avatar index")? };
        let header = Header { width, params, root };

        let depth = params.depth();
        let history = lay.read_node(&mut r, 0, depth, &mut 1)?;
        let mut chains = Vec::new();
        for _ in HistoryCollection::expected_chains(&params) {
            chains.push(ChainFragment {
                root: lay.read_vertex(&mut r)?,
                len: lay.read_u32(&mut r, width, "walk length")?,
                dist: lay.read_u32(&mut r, width, "distance")?,
            });
        }
        let hosted_count = r.get(COUNT_BITS)?;
        let mut hosted = Vec::new();
        for _ in 0..hosted_count {
            let other = lay.read_vertex(&mut r)?;
            let n = r.get(small)?;
            let mut images = Vec::new();
            for _ in 0..n {
                let here = lay.read_u32(&mut r, small, "avatar index")?;
                let there = lay.read_u32(&mut r, small, "avatar index")?;
                let at_here = Avatar { vertex: owner, index: here };
                let at_there = Avatar { vertex: other, index: there };
                let proof = if r.flag()? {
                    let parent = if r.flag()? { at_here } else { at_there };
                    EdgeProof::Tree {
                        parent,
                        first: lay.read_u32(&mut r, width, "tour position")?,
                        last: lay.read_u32(&mut r, width, "tour position")?,
                        enter: lay.read_chord(&mut r)?,
                        leave: lay.read_chord(&mut r)?,
                    }
                } else {
                    EdgeProof::CoTree {
                        x: lay.read_u32(&mut r, width, "tour position")?,
                        y: lay.read_u32(&mut r, width, "tour position")?,
                        above: lay.read_chord(&mut r)?,
                    }
                };
                images.push(Image { here, there, proof });
            }
            hosted.push(EdgeRecord { other, images });
        }
        let cert = Certificate { header, history, chains, hosted };
        if r.remaining() != 0 || cert.encode().as_ref() != Ok(bits) {
            return Err(DecodeError::NonCanonical);
        }
        Ok(cert)
    }
}

impl EdgeRecord {
    /// The planar-graph edges of this record as pairs of avatars, host side
    /// first.
    pub fn avatar_pairs(&self, host: VertexId) -> impl Iterator<Item = (Avatar, Avatar, &Image)> + '_ {
        self.images.iter().map(move |im| {
            (Avatar { vertex: host, index: im.here }, Avatar { vertex: self.other, index: im.there }, im)
        })
    }
}
