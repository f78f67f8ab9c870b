//! Spanning trees of a host graph.

mod augment;
mod enumerate;

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::dsu::Dsu;
use crate::graph::{io, Edge, Graph, Vertex, VertexSet};

pub use augment::{augment_leaf, grow_leaves, AugmentError, Growth};
pub use enumerate::{
    enumerate_spanning_trees, for_each_spanning_tree, Enumeration, Overflow, DEFAULT_TREE_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("expected {expected} edges, got {found}")]
    WrongEdgeCount { expected: usize, found: usize },
    #[error("edge {0} is not in the host graph")]
    NotInHost(Edge),
    #[error("edge {0} closes a cycle")]
    Cycle(Edge),
    #[error("trees belong to different host graphs")]
    HostMismatch,
    #[error("graph is disconnected")]
    Disconnected,
}

/// An edge subset of a host graph forming a tree on all of its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SpanningTree {
    n: usize,
    #[serde(skip)]
    host: u64,
    edges: Vec<Edge>,
    #[serde(skip)]
    degree: Vec<u32>,
}

impl SpanningTree {
    /// Validates `edges` as a spanning tree of `host`.
    pub fn new(host: &Graph, edges: impl IntoIterator<Item = Edge>) -> Result<SpanningTree, TreeError> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        let n = host.n();
        if edges.len() + 1 != n {
            return Err(TreeError::WrongEdgeCount {
                expected: n - 1,
                found: edges.len(),
            });
        }
        let mut dsu = Dsu::new(n + 1);
        for &e in &edges {
            if !host.has_edge(e.u(), e.v()) {
                return Err(TreeError::NotInHost(e));
            }
            if !dsu.union(e.u(), e.v()) {
                return Err(TreeError::Cycle(e));
            }
        }
        Ok(SpanningTree::from_sorted_unchecked(host, edges))
    }

    /// `edges` must be sorted and form a spanning tree of `host`.
    pub(crate) fn from_sorted_unchecked(host: &Graph, edges: Vec<Edge>) -> SpanningTree {
        let n = host.n();
        let mut degree = vec![0u32; n + 1];
        for e in &edges {
            degree[e.u()] += 1;
            degree[e.v()] += 1;
        }
        SpanningTree {
            n,
            host: host.fingerprint(),
            edges,
            degree,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted edge list.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.degree[v] as usize
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.degree[v] == 1
    }

    pub fn is_internal(&self, v: Vertex) -> bool {
        !self.is_leaf(v)
    }

    pub fn leaves(&self) -> VertexSet {
        (1..=self.n).filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn internal(&self) -> VertexSet {
        (1..=self.n).filter(|&v| self.is_internal(v)).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.degree[1..].iter().filter(|&&d| d == 1).count()
    }

    pub fn internal_count(&self) -> usize {
        self.n - self.leaf_count()
    }

    /// Whether this tree was built on `host`.
    pub fn belongs_to(&self, host: &Graph) -> bool {
        self.host == host.fingerprint() && self.n == host.n()
    }

    /// Checks that the number of vertices of tree-degree at least three is
    /// at most the number of leaves minus two.
    pub fn satisfies_branching_bound(&self) -> bool {
        if self.n < 2 {
            return true;
        }
        let branching = self.degree[1..].iter().filter(|&&d| d >= 3).count();
        branching + 2 <= self.leaf_count()
    }

    /// Size of the symmetric difference of the two edge sets.
    pub fn hamming(&self, other: &SpanningTree) -> Result<usize, TreeError> {
        if self.host != other.host || self.n != other.n {
            return Err(TreeError::HostMismatch);
        }
        Ok(symmetric_difference(&self.edges, &other.edges))
    }

    /// The tree as a standalone graph on the same vertex set.
    pub fn to_graph(&self) -> Graph {
        Graph::new(self.n, self.edges.iter().map(|e| (e.u(), e.v()))).expect("tree edges form a simple graph")
    }

    /// Edge-list text, header `n n-1`.
    pub fn to_edge_list(&self) -> String {
        io::write_edges(self.n, &self.edges)
    }

    /// Vertices reachable from `from` in the tree without passing through `avoid`.
    pub(crate) fn component_avoiding(&self, from: Vertex, avoid: Vertex) -> VertexSet {
        let adj = self.adjacency();
        let mut seen = VertexSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if y != avoid && seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Tree neighbors of every vertex, in increasing order.
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for e in &self.edges {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// `|a △ b|` for two sorted edge lists.
pub(crate) fn symmetric_difference(a: &[Edge], b: &[Edge]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// Breadth-first spanning tree from vertex 1, visiting neighbors in
/// increasing id order.
pub fn arbitrary_spanning_tree(g: &Graph) -> Result<SpanningTree, TreeError> {
    let mut seen = vec![false; g.n() + 1];
    let mut edges = Vec::with_capacity(g.n() - 1);
    let mut queue = VecDeque::from([1]);
    seen[1] = true;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                edges.push(Edge::new(v, w));
                queue.push_back(w);
            }
        }
    }
    if edges.len() + 1 != g.n() {
        return Err(TreeError::Disconnected);
    }
    edges.sort_unstable();
    Ok(SpanningTree::from_sorted_unchecked(g, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    fn e(u: Vertex, v: Vertex) -> Edge {
        Edge::new(u, v)
    }

    #[test]
    fn arbitrary_tree_examples() {
        let c4 = generate::cycle(4);
        let t = arbitrary_spanning_tree(&c4).unwrap();
        assert_eq!(t.edges().len(), 3);
        assert_eq!(t.leaf_count(), 2);

        let p5 = generate::path(5);
        assert_eq!(arbitrary_spanning_tree(&p5).unwrap().to_graph(), p5);

        let k4 = generate::complete(4);
        let t = arbitrary_spanning_tree(&k4).unwrap();
        assert_eq!(t, SpanningTree::new(&k4, t.edges().to_vec()).unwrap());
        assert!(t.satisfies_branching_bound());

        let split = Graph::new(4, [(1, 2), (3, 4)]).unwrap();
        assert_eq!(arbitrary_spanning_tree(&split), Err(TreeError::Disconnected));
    }

    #[test]
    fn validation() {
        let c4 = generate::cycle(4);
        assert!(matches!(
            SpanningTree::new(&c4, [e(1, 2), e(2, 3)]),
            Err(TreeError::WrongEdgeCount { expected: 3, found: 2 })
        ));
        assert_eq!(
            SpanningTree::new(&c4, [e(1, 2), e(2, 3), e(1, 3)]),
            Err(TreeError::NotInHost(e(1, 3)))
        );
        let k4 = generate::complete(4);
        assert_eq!(
            SpanningTree::new(&k4, [e(1, 2), e(2, 3), e(1, 3)]),
            Err(TreeError::Cycle(e(2, 3)))
        );
    }

    #[test]
    fn hamming_examples() {
        let c4 = generate::cycle(4);
        let t1 = SpanningTree::new(&c4, [e(1, 2), e(2, 3), e(3, 4)]).unwrap();
        let t2 = SpanningTree::new(&c4, [e(2, 3), e(3, 4), e(4, 1)]).unwrap();
        assert_eq!(t1.hamming(&t1), Ok(0));
        assert_eq!(t1.hamming(&t2), Ok(2));

        let k4 = generate::complete(4);
        let star = SpanningTree::new(&k4, [e(1, 2), e(1, 3), e(1, 4)]).unwrap();
        let path = SpanningTree::new(&k4, [e(1, 2), e(2, 3), e(3, 4)]).unwrap();
        assert_eq!(star.hamming(&path), Ok(4));
        assert_eq!(star.hamming(&t1), Err(TreeError::HostMismatch));
    }

    #[test]
    fn leaves_and_internal_partition() {
        let star = generate::star(4);
        let t = arbitrary_spanning_tree(&star).unwrap();
        assert_eq!(t.leaves(), VertexSet::from([2, 3, 4, 5]));
        assert_eq!(t.internal(), VertexSet::from([1]));
        assert_eq!(t.internal_count(), 1);

        let k1 = Graph::new(1, []).unwrap();
        let t = arbitrary_spanning_tree(&k1).unwrap();
        assert_eq!(t.leaf_count(), 0);
        assert_eq!(t.internal(), VertexSet::from([1]));

        let k2 = generate::path(2);
        assert_eq!(arbitrary_spanning_tree(&k2).unwrap().leaf_count(), 2);
    }

    #[test]
    fn edge_list_output() {
        let t = arbitrary_spanning_tree(&generate::cycle(3)).unwrap();
        assert_eq!(t.to_edge_list(), "3 2\n1 2\n1 3\n");
    }
}
