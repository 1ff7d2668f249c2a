//! Plain-text views of assignments and verdicts, one record per vertex.

use super::bits::Bits;
use super::cert::Certificate;
use super::planarity::{Chord, EdgeProof};
use super::prover::Assignment;
use super::Verdict;
use crate::graph::VertexId;
use crate::histories::HistoryNode;
use std::collections::BTreeMap;
use std::fmt::Write;

/// Hex of the bits, most significant first, the last byte padded with
/// zeros.
pub fn hex(bits: &Bits) -> String {
    bits.chunks(8)
        .map(|c| {
            let byte = c.iter().fold(0u8, |acc, b| (acc << 1) | u8::from(*b)) << (8 - c.len());
            format!("{byte:02x}")
        })
        .collect()
}

fn chord(c: Option<Chord>) -> String {
    c.map_or("-".to_string(), |(x, y)| format!("{x}:{y}"))
}

fn node(out: &mut String, x: &HistoryNode, indent: usize) {
    let pad = "  ".repeat(indent);
    let _ = writeln!(out, "{pad}node {} avatars {}..{}", x.level, x.first, x.last);
    for f in &x.footprints {
        let _ = writeln!(out, "{pad}  pass {} {} {} {} #{}", f.pred, f.succ, f.type_in, f.type_out, f.counter);
    }
    for c in &x.children {
        node(out, c, indent + 1);
    }
}

fn certificate(out: &mut String, v: VertexId, c: &Certificate) {
    let h = &c.header;
    let _ = writeln!(
        out,
        "  header width {} surface {} doublings {} root {}",
        h.width,
        h.params.surface(),
        h.params.doublings,
        h.root
    );
    node(out, &c.history, 1);
    for (i, f) in c.chains.iter().enumerate() {
        let _ = writeln!(out, "  walk {i} root {} length {} dist {}", f.root, f.len, f.dist);
    }
    for rec in &c.hosted {
        let _ = writeln!(out, "  edge {v}-{}", rec.other);
        for im in &rec.images {
            let _ = match im.proof {
                EdgeProof::Tree { parent, first, last, enter, leave } => writeln!(
                    out,
                    "    image {}:{} tree parent {parent} visits {first}..{last} enter {} leave {}",
                    im.here,
                    im.there,
                    chord(enter),
                    chord(leave)
                ),
                EdgeProof::CoTree { x, y, above } => {
                    writeln!(out, "    image {}:{} arc {x}:{y} above {}", im.here, im.there, chord(above))
                }
            };
        }
    }
}

/// Every certificate decoded, with its raw bits. Certificates that do not
/// decode are shown as raw bits and the error.
pub fn format_assignment(a: &Assignment) -> String {
    let mut out = String::new();
    for (&v, bits) in a {
        let _ = writeln!(out, "vertex {v} bits {} hex {}", bits.len(), hex(bits));
        match Certificate::decode(v, bits) {
            Ok(c) => certificate(&mut out, v, &c),
            Err(e) => {
                let _ = writeln!(out, "  undecodable: {e}");
            }
        }
    }
    out
}

/// One line per vertex with its decision and reason code, then a summary.
pub fn format_verdicts(verdicts: &BTreeMap<VertexId, Verdict>) -> String {
    let mut out = String::new();
    let mut rejecting = 0;
    for (v, verdict) in verdicts {
        match verdict {
            Verdict::Accept => {
                let _ = writeln!(out, "vertex {v} accept");
            }
            Verdict::Reject { reason, detail } => {
                rejecting += 1;
                let _ = writeln!(out, "vertex {v} reject {reason}: {detail}");
            }
        }
    }
    if rejecting == 0 {
        let _ = writeln!(out, "accepted by all {} vertices", verdicts.len());
    } else {
        let _ = writeln!(out, "rejected by {rejecting} of {} vertices", verdicts.len());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bitvec::prelude::*;

    #[test]
    fn hex_pads_the_last_byte() {
        let bits: Bits = bitvec![u8, Msb0; 1, 0, 1, 0, 1, 1, 1, 1, 1];
        assert_eq!(hex(&bits), "af80");
        assert_eq!(hex(&Bits::new()), "");
    }
}
