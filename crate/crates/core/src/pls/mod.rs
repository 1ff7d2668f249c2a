//! Certifying an embedding distributively: every vertex gets a bit string,
//! and looks only at its own and its neighbors' to decide.

pub mod bits;
mod central;
pub mod cert;
pub mod mutate;
pub mod planarity;
mod prover;
pub mod text;
mod verifier;

pub use bits::Bits;
pub use central::check_centrally;
pub use prover::{
    bfs_distances, certificates_for, encode_all, hosts, prove, prove_certificates, Assignment, ProveError,
};
pub use verifier::{run_verifier, unanimous, verify_node};

use crate::histories::Clause;
use crate::surgery::Params;
use std::fmt;

/// The class of embeddings a verifier accepts: orientable of genus at most
/// `k`, or of Euler genus at most `k` on any surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scheme {
    pub orientable: bool,
    pub k: u32,
}

impl Scheme {
    pub fn orientable(k: u32) -> Scheme {
        Scheme { orientable: true, k }
    }

    pub fn non_orientable(k: u32) -> Scheme {
        Scheme { orientable: false, k }
    }

    pub fn admits(&self, p: &Params) -> bool {
        if self.orientable {
            p.orientable && p.genus <= self.k
        } else {
            let euler = if p.orientable { 2 * p.genus } else { p.genus };
            euler <= self.k
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orientable {
            write!(f, "genus <= {}", self.k)
        } else {
            write!(f, "euler genus <= {}", self.k)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reason {
    Decode,
    Header,
    Scheme,
    Packing,
    History(Clause),
    Tree,
    Planarity,
    OuterFace,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Decode => f.write_str("decode"),
            Reason::Header => f.write_str("header"),
            Reason::Scheme => f.write_str("scheme"),
            Reason::Packing => f.write_str("packing"),
            Reason::History(c) => write!(f, "history-{}", c.name()),
            Reason::Tree => f.write_str("tree"),
            Reason::Planarity => f.write_str("planarity"),
            Reason::OuterFace => f.write_str("outer-face"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject { reason: Reason, detail: String },
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => f.write_str("accept"),
            Verdict::Reject { reason, detail } => write!(f, "reject {reason} ({detail})"),
        }
    }
}
