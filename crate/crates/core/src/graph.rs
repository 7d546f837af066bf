//! Vertex-indexed multigraphs with stable, positional edge identities.

use std::collections::VecDeque;
use std::ops::Deref;

use thiserror::Error;

use crate::bitset::BitSet;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("loop at vertex {0} rejected")]
    LoopRejected(VertexId),
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotCubic { vertex: VertexId, degree: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("suppressing divalent vertices creates a loop at vertex {0}")]
    LoopCreated(VertexId),
    #[error("vertex {vertex} has degree {degree}, expected 2 or 3")]
    NotSubcubic { vertex: VertexId, degree: usize },
    #[error("malformed graph6: {0}")]
    MalformedGraph6(String),
    #[error("graph6 input encodes a loop")]
    LoopEncountered,
    #[error("edge {0} is parallel to an earlier edge; graph6 cannot encode multigraphs")]
    NotSimple(EdgeId),
    #[error("edge {0} not found")]
    EdgeNotFound(EdgeId),
    #[error("malformed edge list: {0}")]
    MalformedEdgeList(String),
}

/// One end of an edge as seen from a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub edge: EdgeId,
    pub other: VertexId,
}

/// Loopless multigraph. Edge `i` is always the `i`-th pair inserted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<Incidence>>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self, GraphError> {
        let mut g = MultiGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::LoopRejected(u));
        }
        let id = self.edges.len();
        self.edges.push((u, v));
        self.adj[u].push(Incidence { edge: id, other: v });
        self.adj[v].push(Incidence { edge: id, other: u });
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn incident(&self, v: VertexId) -> &[Incidence] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v].iter().map(|i| i.other)
    }

    /// Edge ids joining `u` and `v`, in id order.
    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.adj[u].iter().filter(|i| i.other == v).map(|i| i.edge).collect()
    }

    /// First edge that repeats an earlier vertex pair, if any.
    pub fn first_parallel_edge(&self) -> Option<EdgeId> {
        let mut seen = std::collections::HashSet::new();
        self.edges
            .iter()
            .enumerate()
            .find(|(_, &(u, v))| !seen.insert((u.min(v), u.max(v))))
            .map(|(i, _)| i)
    }

    pub fn is_simple(&self) -> bool {
        self.first_parallel_edge().is_none()
    }

    pub fn edge_set(&self, edges: impl IntoIterator<Item = EdgeId>) -> BitSet {
        BitSet::from_indices(self.m(), edges)
    }

    pub fn vertex_set(&self, vertices: impl IntoIterator<Item = VertexId>) -> BitSet {
        BitSet::from_indices(self.n, vertices)
    }

    /// Connected components as vertex lists, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        self.components_avoiding(&BitSet::new(self.m()))
    }

    /// Components of the graph with the edges in `removed` deleted.
    pub fn components_avoiding(&self, removed: &BitSet) -> Vec<Vec<VertexId>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for inc in &self.adj[v] {
                    if !removed.contains(inc.edge) && comp[inc.other] == usize::MAX {
                        comp[inc.other] = id;
                        members.push(inc.other);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Graph with the given edges deleted; returns the map new edge id -> old edge id.
    pub fn delete_edges(&self, removed: &BitSet) -> (MultiGraph, Vec<EdgeId>) {
        let mut g = MultiGraph::new(self.n);
        let mut map = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if !removed.contains(e) {
                g.add_edge(u, v).expect("edges of a valid graph stay valid");
                map.push(e);
            }
        }
        (g, map)
    }

    /// Subgraph induced by `keep`; vertices are renumbered in increasing order.
    /// Returns the subgraph, the map new vertex -> old vertex and new edge -> old edge.
    pub fn induced_subgraph(&self, keep: &BitSet) -> (MultiGraph, Vec<VertexId>, Vec<EdgeId>) {
        let vmap: Vec<VertexId> = keep.iter().filter(|&v| v < self.n).collect();
        let mut inv = vec![usize::MAX; self.n];
        for (i, &v) in vmap.iter().enumerate() {
            inv[v] = i;
        }
        let mut g = MultiGraph::new(vmap.len());
        let mut emap = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if inv[u] != usize::MAX && inv[v] != usize::MAX {
                g.add_edge(inv[u], inv[v]).expect("induced edges are valid");
                emap.push(e);
            }
        }
        (g, vmap, emap)
    }

    /// Graph with the vertices in `removed` (and their edges) deleted.
    pub fn delete_vertices(&self, removed: &BitSet) -> (MultiGraph, Vec<VertexId>, Vec<EdgeId>) {
        let keep = BitSet::from_indices(self.n, (0..self.n).filter(|&v| !removed.contains(v)));
        self.induced_subgraph(&keep)
    }

    /// Replaces edge `e = uv` by `uw`, `wv` through a new vertex `w`.
    /// Edge `e` keeps its id as `uw`; `wv` is appended.
    pub fn subdivide_edge(&self, e: EdgeId) -> Result<(MultiGraph, VertexId), GraphError> {
        if e >= self.m() {
            return Err(GraphError::EdgeNotFound(e));
        }
        let (u, v) = self.edges[e];
        let w = self.n;
        let mut edges = self.edges.clone();
        edges[e] = (u, w);
        edges.push((w, v));
        Ok((MultiGraph::from_edges(self.n + 1, edges)?, w))
    }

    /// BFS distances from `s`; `usize::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, s: VertexId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut q = VecDeque::new();
        dist[s] = 0;
        q.push_back(s);
        while let Some(v) = q.pop_front() {
            for inc in &self.adj[v] {
                if dist[inc.other] == usize::MAX {
                    dist[inc.other] = dist[v] + 1;
                    q.push_back(inc.other);
                }
            }
        }
        dist
    }

    /// Vertices in BFS order from `s` (other components appended in vertex order).
    pub fn bfs_order(&self, s: VertexId) -> Vec<VertexId> {
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for root in std::iter::once(s).chain(0..self.n) {
            if root >= self.n || seen[root] {
                continue;
            }
            seen[root] = true;
            let start = order.len();
            order.push(root);
            let mut i = start;
            while i < order.len() {
                let v = order[i];
                i += 1;
                for inc in &self.adj[v] {
                    if !seen[inc.other] {
                        seen[inc.other] = true;
                        order.push(inc.other);
                    }
                }
            }
        }
        order
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for inc in &self.adj[v] {
                    if side[inc.other] == u8::MAX {
                        side[inc.other] = 1 - side[v];
                        stack.push(inc.other);
                    } else if side[inc.other] == side[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Sorted list of normalized vertex pairs, for edge-set comparisons.
    pub fn edge_multiset(&self) -> Vec<(VertexId, VertexId)> {
        let mut v: Vec<_> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        v.sort_unstable();
        v
    }
}

/// A multigraph in which every vertex has degree exactly 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicGraph(MultiGraph);

impl CubicGraph {
    pub fn into_inner(self) -> MultiGraph {
        self.0
    }

    pub fn as_multigraph(&self) -> &MultiGraph {
        &self.0
    }
}

impl Deref for CubicGraph {
    type Target = MultiGraph;
    fn deref(&self) -> &MultiGraph {
        &self.0
    }
}

impl TryFrom<MultiGraph> for CubicGraph {
    type Error = GraphError;
    fn try_from(g: MultiGraph) -> Result<Self, GraphError> {
        as_cubic(g)
    }
}

/// Validates that every vertex of `g` has degree 3.
pub fn as_cubic(g: MultiGraph) -> Result<CubicGraph, GraphError> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) != 3) {
        return Err(GraphError::NotCubic {
            vertex: v,
            degree: g.degree(v),
        });
    }
    Ok(CubicGraph(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> MultiGraph {
        MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn loops_and_range_rejected() {
        let mut g = MultiGraph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::LoopRejected(1)));
        assert!(matches!(g.add_edge(0, 3), Err(GraphError::VertexOutOfRange { .. })));
        assert_eq!(g.add_edge(0, 1), Ok(0));
        assert_eq!(g.add_edge(1, 0), Ok(1));
        assert!(!g.is_simple());
        assert_eq!(g.first_parallel_edge(), Some(1));
    }

    #[test]
    fn cubic_validation() {
        assert!(as_cubic(k4()).is_ok());
        let p2 = MultiGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(as_cubic(p2), Err(GraphError::NotCubic { vertex: 0, degree: 1 }));
        let theta = MultiGraph::from_edges(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
        assert!(as_cubic(theta).is_ok());
    }

    #[test]
    fn handshake_on_k4() {
        let g = as_cubic(k4()).unwrap();
        assert_eq!(2 * g.m(), 3 * g.n());
    }

    #[test]
    fn subdivision_keeps_edge_id() {
        let (h, w) = k4().subdivide_edge(2).unwrap();
        assert_eq!(w, 4);
        assert_eq!(h.endpoints(2), (0, 4));
        assert_eq!(h.endpoints(6), (4, 3));
        assert_eq!(h.degree(4), 2);
    }

    #[test]
    fn induced_and_deleted() {
        let g = k4();
        let (h, vmap, emap) = g.delete_vertices(&g.vertex_set([0]));
        assert_eq!(h.n(), 3);
        assert_eq!(h.m(), 3);
        assert_eq!(vmap, vec![1, 2, 3]);
        assert_eq!(emap, vec![3, 4, 5]);
        assert!(!h.is_bipartite());
    }
}
