//! Simple undirected graphs keyed by integer vertex IDs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

pub type VertexId = u32;

/// An undirected edge stored with its smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub VertexId, pub VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Edge {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.0 {
            self.1
        } else {
            self.0
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(VertexId, VertexId),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    /// Builds a graph from an edge list; duplicate edges and loops are rejected.
    pub fn from_edges(edges: &[(VertexId, VertexId)]) -> Result<Graph, GraphError> {
        let mut g = Graph::new();
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::ParallelEdge(u.min(v), u.max(v)));
        }
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        if let Some(nbrs) = self.adj.remove(&v) {
            for w in nbrs {
                if let Some(s) = self.adj.get_mut(&w) {
                    s.remove(&v);
                }
            }
        }
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.m());
        for (&u, nbrs) in &self.adj {
            for &v in nbrs.range(u + 1..) {
                out.push(Edge(u, v));
            }
        }
        out
    }

    pub fn max_id(&self) -> Option<VertexId> {
        self.adj.keys().next_back().copied()
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.adj.keys().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([*start]);
        let mut queue = VecDeque::from([*start]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.n()
    }

    /// Checks the standing assumptions of the certification model.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.adj.is_empty() {
            return Err(GraphError::Empty);
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(())
    }
}

/// Repeatedly removes a minimum-degree vertex (lowest ID on ties).
/// Returns the removal order and the degeneracy, i.e. the largest degree
/// seen at removal time.
pub fn degeneracy_order(g: &Graph) -> (Vec<VertexId>, usize) {
    let mut deg: BTreeMap<VertexId, usize> = g.vertices().map(|v| (v, g.degree(v))).collect();
    let mut queue: BTreeSet<(usize, VertexId)> = deg.iter().map(|(&v, &d)| (d, v)).collect();
    let mut removed = BTreeSet::new();
    let mut order = Vec::with_capacity(g.n());
    let mut d = 0;
    while let Some((dv, v)) = queue.pop_first() {
        d = d.max(dv);
        removed.insert(v);
        order.push(v);
        for w in g.neighbors(v) {
            if removed.contains(&w) {
                continue;
            }
            let dw = deg[&w];
            queue.remove(&(dw, w));
            queue.insert((dw - 1, w));
            deg.insert(w, dw - 1);
        }
    }
    (order, d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: VertexId,
    pub parent: BTreeMap<VertexId, Option<VertexId>>,
    pub dist: BTreeMap<VertexId, u32>,
}

impl SpanningTree {
    pub fn children(&self, v: VertexId) -> Vec<VertexId> {
        self.parent.iter().filter(|(_, p)| **p == Some(v)).map(|(&c, _)| c).collect()
    }

    pub fn tree_edges(&self) -> Vec<Edge> {
        self.parent.iter().filter_map(|(&c, p)| p.map(|p| Edge::new(c, p))).collect()
    }
}

/// BFS tree; neighbors are explored in increasing ID order.
pub fn spanning_tree(g: &Graph, root: VertexId) -> Result<SpanningTree, GraphError> {
    if !g.has_vertex(root) {
        return Err(GraphError::UnknownVertex(root));
    }
    let mut parent = BTreeMap::from([(root, None)]);
    let mut dist = BTreeMap::from([(root, 0)]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        for w in g.neighbors(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(dv + 1);
                parent.insert(w, Some(v));
                queue.push_back(w);
            }
        }
    }
    if parent.len() != g.n() {
        return Err(GraphError::Disconnected);
    }
    Ok(SpanningTree { root, parent, dist })
}

pub mod families {
    //! Small named graphs used throughout the tests and fixtures.
    use super::{Graph, VertexId};

    pub fn complete(n: VertexId) -> Graph {
        let mut g = Graph::new();
        for u in 1..=n {
            g.add_vertex(u);
            for v in u + 1..=n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    /// Parts are 1..=a and a+1..=a+b.
    pub fn complete_bipartite(a: VertexId, b: VertexId) -> Graph {
        let mut g = Graph::new();
        for u in 1..=a {
            for v in a + 1..=a + b {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn path(n: VertexId) -> Graph {
        let mut g = Graph::new();
        g.add_vertex(1);
        for v in 2..=n {
            g.add_edge(v - 1, v).unwrap();
        }
        g
    }

    pub fn cycle(n: VertexId) -> Graph {
        let mut g = path(n);
        g.add_edge(n, 1).unwrap();
        g
    }

    /// Center 1, leaves 2..=n+1.
    pub fn star(leaves: VertexId) -> Graph {
        let mut g = Graph::new();
        for v in 2..=leaves + 1 {
            g.add_edge(1, v).unwrap();
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    #[test]
    fn rejects_loops_and_parallel_edges() {
        assert_eq!(Graph::from_edges(&[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::from_edges(&[(1, 2), (2, 1)]), Err(GraphError::ParallelEdge(1, 2)));
    }

    #[test]
    fn degeneracy_of_named_graphs() {
        assert_eq!(degeneracy_order(&complete(7)).1, 6);
        assert_eq!(degeneracy_order(&complete(5)).1, 4);
        assert_eq!(degeneracy_order(&path(9)).1, 1);
        assert_eq!(degeneracy_order(&star(6)).1, 1);
        assert_eq!(degeneracy_order(&cycle(6)).1, 2);
    }

    #[test]
    fn star_center_waits_for_its_leaves() {
        let (order, _) = degeneracy_order(&star(5));
        assert_eq!(order, vec![2, 3, 4, 5, 1, 6]);
    }

    #[test]
    fn bfs_tree_on_path_and_k4() {
        let t = spanning_tree(&path(3), 1).unwrap();
        assert_eq!(t.parent[&2], Some(1));
        assert_eq!(t.parent[&3], Some(2));
        assert_eq!(t.dist.values().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
        let t = spanning_tree(&complete(4), 1).unwrap();
        assert!(t.dist.iter().all(|(&v, &d)| d == u32::from(v != 1)));
        assert_eq!(t.tree_edges().len(), 3);
    }

    #[test]
    fn disconnected_graph_fails_validation() {
        let mut g = path(3);
        g.add_vertex(10);
        assert_eq!(g.validate(), Err(GraphError::Disconnected));
        assert!(spanning_tree(&g, 1).is_err());
    }
}
