//! Vertex, edge and face counts across each step of a trace.

use super::{StepKind, UnfoldingTrace};
use crate::embedding::{EmbeddingError, EmbeddingScheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub vertices: i64,
    pub edges: i64,
    pub faces: i64,
    /// 2 − χ: twice the genus on orientable surfaces, the demigenus otherwise.
    pub euler_genus: i64,
}

impl Counts {
    pub fn of(s: &EmbeddingScheme) -> Result<Counts, EmbeddingError> {
        let faces = s.trace_faces()?.len() as i64;
        let (vertices, edges) = (s.n() as i64, s.m() as i64);
        Ok(Counts { vertices, edges, faces, euler_genus: 2 - (vertices - edges + faces) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub kind: StepKind,
    pub index: u32,
    /// Vertices on the cut cycle or path.
    pub object_len: i64,
    pub before: Counts,
    pub after: Counts,
}

impl LedgerEntry {
    /// (ΔV, ΔE, ΔF, Δ Euler genus) observed.
    pub fn delta(&self) -> (i64, i64, i64, i64) {
        let (a, b) = (self.after, self.before);
        (a.vertices - b.vertices, a.edges - b.edges, a.faces - b.faces, a.euler_genus - b.euler_genus)
    }

    /// (ΔV, ΔE, ΔF, Δ Euler genus) the step kind prescribes.
    pub fn expected(&self) -> (i64, i64, i64, i64) {
        let p = self.object_len;
        match self.kind {
            StepKind::CycleDup => (p, p, 2, -2),
            StepKind::PathDup => (p, p - 1, -1, 0),
            StepKind::CycleDouble => (p, p, 1, -1),
        }
    }

    pub fn balanced(&self) -> bool {
        self.delta() == self.expected()
    }
}

pub fn ledger(trace: &UnfoldingTrace) -> Result<Vec<LedgerEntry>, EmbeddingError> {
    let counts: Vec<Counts> = trace.stages.iter().map(Counts::of).collect::<Result<_, _>>()?;
    Ok(trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, step)| LedgerEntry {
            kind: step.kind,
            index: step.index,
            object_len: step.object.len() as i64,
            before: counts[i],
            after: counts[i + 1],
        })
        .collect())
}
