//! Plain-text report of an unfolding. Output depends only on the trace, and
//! the trace only on the input scheme, so reports are byte-stable.

use super::pipeline::UnfoldingTrace;
use crate::textfmt::format_scheme;
use std::fmt::Write;

fn join(vs: impl IntoIterator<Item = impl std::fmt::Display>) -> String {
    vs.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn format_trace(trace: &UnfoldingTrace) -> String {
    let mut out = String::new();
    let p = trace.params;
    writeln!(
        out,
        "surface {} {}\nschedule doublings {} duplications {} paths {}",
        if p.orientable { "orientable" } else { "non-orientable" },
        p.genus,
        p.doublings,
        p.duplications,
        p.path_count()
    )
    .unwrap();
    for (i, s) in trace.stages.iter().enumerate() {
        let faces = s.trace_faces().map(|f| f.len()).unwrap_or(0);
        let kind = s.euler_genus().map(|k| k.to_string()).unwrap_or_else(|e| e.to_string());
        writeln!(out, "stage {i} vertices {} edges {} faces {faces} ({kind})", s.n(), s.m()).unwrap();
    }
    for (i, step) in trace.steps.iter().enumerate() {
        writeln!(out, "step {} {} {}", i + 1, step.kind, step.index).unwrap();
        writeln!(out, "  object {}", join(&step.object)).unwrap();
        for (x, cs) in &step.splitting.children {
            if cs.len() > 1 {
                writeln!(out, "  split {x} -> {}", join(cs)).unwrap();
            }
        }
        for (l, w) in &trace.walks[i + 1] {
            writeln!(out, "  walk {l} : {}", join(w.vertices())).unwrap();
        }
    }
    if let Some(w) = trace.special_walk() {
        writeln!(out, "special {}", join(w.vertices())).unwrap();
    }
    out.push_str("unfolded\n");
    out.push_str(&format_scheme(trace.unfolded()));
    out
}
