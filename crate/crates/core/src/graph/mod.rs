//! Simple undirected graphs on vertices `1..=n`.
//!
//! A [`Graph`] is an immutable value: contraction and deletion return a new
//! graph together with the [`Renaming`] that maps old vertex ids to new ones.
//! Adjacency is kept in compressed (CSR) form so that the kernelization loop,
//! which rebuilds the graph after every rule application, stays cheap.

pub mod generate;
pub mod io;
mod paths;

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use paths::Degree2Path;

/// Vertex id, 1-based.
pub type Vertex = usize;

/// Ordered vertex set; ordered so that every traversal is reproducible.
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(Edge),
    #[error("contracting {0} would create a parallel edge")]
    ParallelEdge(Edge),
    #[error("invalid degree-2-path: {0}")]
    InvalidPath(String),
    #[error("path of length {0} is too short to contract (need at least 3, or 4 when closed)")]
    PathTooShort(usize),
}

/// Unordered edge `{u, v}` stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[Vertex; 2]", try_from = "[Vertex; 2]")]
pub struct Edge(Vertex, Vertex);

impl Edge {
    /// Normalizes the endpoint order. Panics on a loop, which no simple graph contains.
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        assert_ne!(a, b, "an edge needs two distinct endpoints");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(self) -> Vertex {
        self.0
    }

    pub fn v(self) -> Vertex {
        self.1
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint opposite to `x`; `x` must be an endpoint.
    pub fn other(self, x: Vertex) -> Vertex {
        debug_assert!(self.contains(x));
        if self.0 == x {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl From<Edge> for [Vertex; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl TryFrom<[Vertex; 2]> for Edge {
    type Error = GraphError;

    fn try_from([a, b]: [Vertex; 2]) -> Result<Self, Self::Error> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        Ok(Edge::new(a, b))
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    fingerprint: u64,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<Edge>,
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { n: g.n, edges: g.edges }
    }
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;

    fn try_from(r: GraphRepr) -> Result<Self, Self::Error> {
        Graph::new(r.n, r.edges.into_iter().map(|e| (e.0, e.1)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a simple graph, rejecting loops, duplicates and out-of-range ids.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x == 0 || x > n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push(Edge::new(a, b));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0]));
        }
        Ok(Graph::from_sorted_unique(n, list))
    }

    /// Edges must already be normalized, sorted, deduplicated and in range.
    fn from_sorted_unique(n: usize, edges: Vec<Edge>) -> Graph {
        let mut degree = vec![0usize; n + 1];
        for e in &edges {
            degree[e.0] += 1;
            degree[e.1] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 1..=n {
            offsets[v] = offsets[v - 1] + degree[v];
        }
        // offsets[v-1]..offsets[v] is the slice of vertex v.
        let mut fill: Vec<usize> = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * edges.len()];
        for e in &edges {
            targets[fill[e.0 - 1]] = e.1;
            fill[e.0 - 1] += 1;
            targets[fill[e.1 - 1]] = e.0;
            fill[e.1 - 1] += 1;
        }
        for v in 1..=n {
            targets[offsets[v - 1]..offsets[v]].sort_unstable();
        }
        let mut hasher = DefaultHasher::new();
        n.hash(&mut hasher);
        edges.hash(&mut hasher);
        Graph {
            n,
            edges,
            offsets,
            targets,
            fingerprint: hasher.finish(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    /// Sorted edge list.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v - 1]..self.offsets[v]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v] - self.offsets[v - 1]
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        (1..=self.n).contains(&v)
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b
            && self.contains_vertex(a)
            && self.contains_vertex(b)
            && self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Hash of `(n, edges)`; used to tie spanning trees to their host.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn min_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.m() + 1 == self.n && self.is_connected()
    }

    /// Degree-1 vertices in increasing order.
    pub fn pendant_vertices(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.degree(v) == 1).collect()
    }

    /// Contracts the edge `ab`. The smaller id survives and absorbs the
    /// neighbors of the larger one; ids above the removed vertex shift down.
    pub fn contract_edge(&self, a: Vertex, b: Vertex) -> Result<Reshaped, GraphError> {
        if !self.has_edge(a, b) {
            let e = if a != b { Edge::new(a, b) } else { Edge(a, b) };
            return Err(GraphError::NotAnEdge(e));
        }
        let (keep, drop) = (a.min(b), a.max(b));
        let (na, nb) = (self.neighbors(keep), self.neighbors(drop));
        if na.iter().any(|x| nb.binary_search(x).is_ok()) {
            return Err(GraphError::ParallelEdge(Edge::new(a, b)));
        }
        let renaming = Renaming {
            removed: drop,
            merged_into: Some(keep),
        };
        Ok(self.relabel(renaming))
    }

    /// Removes `v` and its incident edges. The result may be disconnected.
    pub fn delete_vertex(&self, v: Vertex) -> Result<Reshaped, GraphError> {
        if !self.contains_vertex(v) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        if self.n == 1 {
            return Err(GraphError::Empty);
        }
        Ok(self.relabel(Renaming {
            removed: v,
            merged_into: None,
        }))
    }

    fn relabel(&self, renaming: Renaming) -> Reshaped {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .filter_map(|e| {
                let a = renaming.apply(e.0)?;
                let b = renaming.apply(e.1)?;
                (a != b).then(|| Edge::new(a, b))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Reshaped {
            graph: Graph::from_sorted_unique(self.n - 1, edges),
            renaming,
        }
    }

    /// Relabels vertices by a permutation given as `perm[old - 1] = new`.
    pub fn permute(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::new(
            self.n,
            self.edges.iter().map(|e| (perm[e.0 - 1], perm[e.1 - 1])),
        )
        .expect("a permutation keeps the graph simple")
    }
}

/// Old→new vertex map produced by removing one vertex, optionally merging it
/// into a surviving vertex with a smaller id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Renaming {
    pub removed: Vertex,
    pub merged_into: Option<Vertex>,
}

impl Renaming {
    /// New id of the old vertex `x`, or `None` if it was deleted.
    pub fn apply(&self, x: Vertex) -> Option<Vertex> {
        let shift = |y: Vertex| if y > self.removed { y - 1 } else { y };
        if x == self.removed {
            self.merged_into.map(shift)
        } else {
            Some(shift(x))
        }
    }

    /// Materializes the map for a graph that had `n` vertices before.
    pub fn to_vec(&self, n: usize) -> Vec<Option<Vertex>> {
        (1..=n).map(|x| self.apply(x)).collect()
    }

    /// Old ids that map onto the new id `y`: one vertex, or two for the
    /// merged vertex of a contraction.
    pub fn preimage(&self, y: Vertex) -> Vec<Vertex> {
        let old = if y >= self.removed { y + 1 } else { y };
        let mut out = vec![old];
        if let Some(keep) = self.merged_into {
            if keep == y {
                out = vec![keep, self.removed];
            }
        }
        out
    }
}

/// A graph produced by contraction or deletion, with the renaming that produced it.
#[derive(Debug, Clone)]
pub struct Reshaped {
    pub graph: Graph,
    pub renaming: Renaming,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(Vertex, Vertex)]) -> Graph {
        Graph::new(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_malformed_edge_sets() {
        assert_eq!(Graph::new(0, []), Err(GraphError::Empty));
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::new(3, [(1, 4)]),
            Err(GraphError::VertexOutOfRange { vertex: 4, n: 3 })
        );
        assert_eq!(
            Graph::new(3, [(1, 2), (2, 1)]),
            Err(GraphError::DuplicateEdge(Edge::new(1, 2)))
        );
    }

    #[test]
    fn adjacency_matches_edges() {
        let k4 = generate::complete(4);
        for e in k4.edges() {
            assert!(k4.neighbors(e.u()).contains(&e.v()));
            assert!(k4.neighbors(e.v()).contains(&e.u()));
        }
        assert_eq!(k4.neighbors(2), &[1, 3, 4]);
        assert!(k4.has_edge(4, 1));
        assert!(!k4.has_edge(4, 4));
    }

    #[test]
    fn pendant_vertices_examples() {
        assert_eq!(generate::path(3).pendant_vertices(), vec![1, 3]);
        assert!(generate::cycle(4).pendant_vertices().is_empty());
        assert_eq!(generate::star(4).pendant_vertices(), vec![2, 3, 4, 5]);
    }

    #[test]
    fn delete_vertex_examples() {
        let k3 = generate::complete(3);
        let r = k3.delete_vertex(3).unwrap();
        assert_eq!(r.graph, g(2, &[(1, 2)]));

        let star = generate::star(3);
        let r = star.delete_vertex(1).unwrap();
        assert_eq!(r.graph.n(), 3);
        assert_eq!(r.graph.m(), 0);
        assert!(!r.graph.is_connected());
        assert_eq!(r.renaming.to_vec(4), vec![None, Some(1), Some(2), Some(3)]);

        let p3 = generate::path(3);
        let r = p3.delete_vertex(2).unwrap();
        assert_eq!(r.graph.m(), 0);
        assert_eq!(r.graph.n(), 2);

        assert!(matches!(
            p3.delete_vertex(7),
            Err(GraphError::VertexOutOfRange { vertex: 7, .. })
        ));
    }

    #[test]
    fn contraction_merges_into_smaller_id() {
        // 1-2-3-4-5-1, contract 3-4
        let c5 = generate::cycle(5);
        let r = c5.contract_edge(4, 3).unwrap();
        assert_eq!(r.graph, generate::cycle(4));
        assert_eq!(r.renaming.apply(4), Some(3));
        assert_eq!(r.renaming.apply(5), Some(4));
        assert_eq!(r.renaming.preimage(3), vec![3, 4]);
        assert_eq!(r.renaming.preimage(4), vec![5]);
        assert_eq!(r.renaming.preimage(2), vec![2]);
    }

    #[test]
    fn contraction_refuses_parallel_edges() {
        let k3 = generate::complete(3);
        assert_eq!(
            k3.contract_edge(1, 2).unwrap_err(),
            GraphError::ParallelEdge(Edge::new(1, 2))
        );
        assert!(matches!(
            generate::path(3).contract_edge(1, 3),
            Err(GraphError::NotAnEdge(_))
        ));
    }

    #[test]
    fn fingerprint_distinguishes_hosts() {
        assert_ne!(
            generate::cycle(4).fingerprint(),
            generate::path(4).fingerprint()
        );
        assert_eq!(
            generate::cycle(4).fingerprint(),
            g(4, &[(4, 1), (3, 4), (2, 3), (1, 2)]).fingerprint()
        );
    }

    #[test]
    fn edge_serializes_as_pair() {
        let e = Edge::new(5, 2);
        assert_eq!(serde_json::to_string(&e).unwrap(), "[2,5]");
        let back: Edge = serde_json::from_str("[5,2]").unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<Edge>("[3,3]").is_err());
    }
}
