//! Plain-text dump of a history collection: one block per vertex, nodes
//! indented by level.

use super::index::Stages;
use super::{HistoryCollection, HistoryNode, StageVertex};
use crate::graph::VertexId;
use std::fmt::Write;

fn node(out: &mut String, st: &Stages<'_>, v: VertexId, x: &HistoryNode) {
    let pad = "  ".repeat(x.level + 1);
    let me = StageVertex { vertex: v, first: x.first };
    let nbrs: Vec<String> = st.neighborhood(x.level, me).iter().map(|n| n.to_string()).collect();
    writeln!(out, "{pad}node {} avatars {}..{} near {}", x.level, x.first, x.last, nbrs.join(" ")).unwrap();
    for f in &x.footprints {
        writeln!(out, "{pad}  pass {} {} {} {} #{}", f.pred, f.succ, f.type_in, f.type_out, f.counter).unwrap();
    }
    for c in &x.children {
        node(out, st, v, c);
    }
}

pub fn format_histories(hc: &HistoryCollection) -> String {
    let st = Stages::new(hc);
    let mut out = String::new();
    for ((level, face), info) in &hc.chains {
        writeln!(out, "walk {face} level {level} root {} length {}", info.root, info.len).unwrap();
    }
    for (&v, root) in &hc.histories {
        writeln!(out, "history {v}").unwrap();
        node(&mut out, &st, v, root);
    }
    out
}
