//! Plain-text embedding format: one `v <id> : <rotation>` record per vertex,
//! where a neighbor suffixed with `-` marks an edge of signature -1.

use crate::embedding::{EmbeddingError, EmbeddingScheme};
use crate::graph::{Edge, VertexId};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn parse_scheme(text: &str) -> Result<EmbeddingScheme, ParseError> {
    let mut rotation: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut line_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut signs: BTreeMap<Edge, (bool, usize)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let rest = content.strip_prefix("v ").ok_or_else(|| err(line, "expected a record starting with `v`"))?;
        let (id_part, darts) = rest.split_once(':').ok_or_else(|| err(line, "missing `:` after the vertex id"))?;
        let v: VertexId =
            id_part.trim().parse().map_err(|_| err(line, format!("bad vertex id `{}`", id_part.trim())))?;
        if rotation.contains_key(&v) {
            return Err(err(line, format!("vertex {v} listed twice")));
        }
        let mut rot = Vec::new();
        for tok in darts.split_whitespace() {
            let (num, negative) = match tok.strip_suffix('-') {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let w: VertexId = num.parse().map_err(|_| err(line, format!("bad neighbor `{tok}`")))?;
            let e = Edge::new(v, w);
            if let Some(&(prev, prev_line)) = signs.get(&e) {
                if prev != negative {
                    return Err(err(line, format!("signature of edge {v}-{w} conflicts with line {prev_line}")));
                }
            } else {
                signs.insert(e, (negative, line));
            }
            rot.push(w);
        }
        rotation.insert(v, rot);
        line_of.insert(v, line);
    }
    let negative: BTreeSet<Edge> = signs.iter().filter(|(_, &(neg, _))| neg).map(|(&e, _)| e).collect();
    EmbeddingScheme::new(rotation, negative).map_err(|e| {
        let at = match &e {
            EmbeddingError::Asymmetric { v, .. } => line_of.get(v).copied(),
            EmbeddingError::RepeatedDart(v) => line_of.get(v).copied(),
            EmbeddingError::Graph(crate::graph::GraphError::SelfLoop(v)) => line_of.get(v).copied(),
            EmbeddingError::SignatureOnNonEdge(v, _) => line_of.get(v).copied(),
            _ => None,
        };
        err(at.unwrap_or(0), e.to_string())
    })
}

pub fn format_scheme(s: &EmbeddingScheme) -> String {
    let mut out = String::new();
    for (&v, rot) in s.rotations() {
        write!(out, "v {v} :").unwrap();
        for &w in rot {
            write!(out, " {w}{}", if s.sign(v, w) < 0 { "-" } else { "" }).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_signs() {
        let text = "# triangle with a twist\nv 1 : 2 3-\nv 2 : 3 1\n\nv 3 : 1- 2\n";
        let s = parse_scheme(text).unwrap();
        assert_eq!(s.sign(1, 3), -1);
        assert_eq!(s.sign(1, 2), 1);
        assert_eq!(parse_scheme(&format_scheme(&s)).unwrap(), s);
    }

    #[test]
    fn conflicting_suffix_is_reported_with_line() {
        let e = parse_scheme("v 1 : 2-\nv 2 : 1\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn missing_reverse_dart_is_reported() {
        let e = parse_scheme("v 1 : 2\nv 2 :\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_scheme("w 1 : 2").is_err());
        assert!(parse_scheme("v x : 2").is_err());
    }
}
