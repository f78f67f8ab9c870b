//! Leaf-increasing edge exchanges and the growth loop built on them.

use thiserror::Error;

use super::{SpanningTree, TreeError};
use crate::graph::{Degree2Path, Edge, Graph, GraphError, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AugmentError {
    #[error("tree does not belong to the given graph")]
    HostMismatch,
    #[error("not a degree-2-path of the tree: {0}")]
    InvalidPath(GraphError),
    #[error("path of length {0} is too short, need at least 6")]
    PathTooShort(usize),
    #[error("vertex {0} is not strictly internal to the path")]
    NotStrictlyInternal(Vertex),
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(Edge),
    #[error("cannot add a loop at {0}")]
    Loop(Vertex),
    #[error("{0} is already a tree edge")]
    TreeEdge(Edge),
    #[error("non-terminal {0} is a leaf of the start tree")]
    NonterminalLeaf(Vertex),
    #[error("path length threshold must be at least 2, got {0}")]
    ThresholdTooSmall(usize),
    #[error("graph has a degree-2-path of length {len} >= {s} avoiding the non-terminals")]
    LongPath { len: usize, s: usize },
    #[error("no improving exchange although the graph has {n} >= {bound} vertices")]
    Stalled { n: usize, bound: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Exchanges one tree edge for the non-tree edge `vw`, where `v` is strictly
/// internal to the tree degree-2-path `path`. The result has at least one
/// more leaf, and every new leaf is an internal vertex of `path`.
///
/// With the tree rooted at `path.start()` and `path = (x_0, ..., x_r)`,
/// `v = x_j`:
/// * `w` beyond the far end (`x_r` or its side of the tree): delete `x_{r-2} x_{r-1}`;
/// * `w = x_i`, `j < i < r`: delete `x_{i-1} x_i`;
/// * `w = x_i`, `1 <= i < j`: delete `x_i x_{i+1}`;
/// * `w = x_0` or anywhere else: delete `x_1 x_2`.
pub fn augment_leaf(
    g: &Graph,
    t: &SpanningTree,
    path: &Degree2Path,
    v: Vertex,
    w: Vertex,
) -> Result<SpanningTree, AugmentError> {
    if !t.belongs_to(g) {
        return Err(AugmentError::HostMismatch);
    }
    path.validate_in(&t.to_graph()).map_err(AugmentError::InvalidPath)?;
    let x = path.vertices();
    let r = path.len();
    if r < 6 {
        return Err(AugmentError::PathTooShort(r));
    }
    let j = match path.strictly_internal().iter().position(|&y| y == v) {
        Some(off) => off + 3,
        None => return Err(AugmentError::NotStrictlyInternal(v)),
    };
    if v == w {
        return Err(AugmentError::Loop(v));
    }
    if !g.has_edge(v, w) {
        return Err(AugmentError::NotAnEdge(Edge::new(v, w)));
    }
    let vw = Edge::new(v, w);
    if t.has_edge(vw) {
        return Err(AugmentError::TreeEdge(vw));
    }

    let far_side = t.component_avoiding(x[r], x[r - 1]);
    let (a, b) = if far_side.contains(&w) {
        (x[r - 2], x[r - 1])
    } else {
        match path.position(w) {
            Some(i) if i > j => (x[i - 1], x[i]),
            Some(i) if i >= 1 => (x[i], x[i + 1]),
            _ => (x[1], x[2]),
        }
    };
    let removed = Edge::new(a, b);
    let edges = t
        .edges()
        .iter()
        .copied()
        .filter(|&e| e != removed)
        .chain(std::iter::once(vw));
    let out = SpanningTree::new(g, edges)?;
    debug_assert!(out.leaf_count() > t.leaf_count());
    Ok(out)
}

/// Result of [`grow_leaves`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Growth {
    /// A tree with at least `target` leaves and all non-terminals internal.
    Reached { tree: SpanningTree, augmentations: usize },
    /// No exchange applies and the target is unreached; the graph then has
    /// fewer than `bound = (2 * target + |nt|) * (s + 3)` vertices.
    Small { tree: SpanningTree, bound: usize },
}

impl Growth {
    pub fn tree(&self) -> &SpanningTree {
        match self {
            Growth::Reached { tree, .. } | Growth::Small { tree, .. } => tree,
        }
    }
}

/// Repeats [`augment_leaf`] from `start` until the tree has `target` leaves
/// or no tree degree-2-path avoiding `nt` admits an exchange.
///
/// Requires every vertex of `nt` to be internal in `start`, `s >= 2`, and no
/// degree-2-path of `g` of length at least `s` whose internal vertices avoid
/// `nt`. Paths are scanned in sorted order, then strictly internal vertices
/// along the path, then `w` by increasing id.
pub fn grow_leaves(
    g: &Graph,
    start: &SpanningTree,
    nt: &VertexSet,
    target: usize,
    s: usize,
) -> Result<Growth, AugmentError> {
    if !start.belongs_to(g) {
        return Err(AugmentError::HostMismatch);
    }
    if s < 2 {
        return Err(AugmentError::ThresholdTooSmall(s));
    }
    if let Some(&v) = nt.iter().find(|&&v| !start.is_internal(v)) {
        return Err(AugmentError::NonterminalLeaf(v));
    }
    if let Some(p) = g.maximal_degree2_paths(nt).iter().find(|p| p.len() >= s) {
        return Err(AugmentError::LongPath { len: p.len(), s });
    }

    let mut tree = start.clone();
    let mut augmentations = 0;
    loop {
        if tree.leaf_count() >= target {
            return Ok(Growth::Reached { tree, augmentations });
        }
        match find_exchange(g, &tree, nt) {
            Some((path, v, w)) => {
                tree = augment_leaf(g, &tree, &path, v, w)?;
                augmentations += 1;
            }
            None => {
                let bound = (2 * target + nt.len()) * (s + 3);
                if g.n() >= bound {
                    return Err(AugmentError::Stalled { n: g.n(), bound });
                }
                return Ok(Growth::Small { tree, bound });
            }
        }
    }
}

fn find_exchange(g: &Graph, tree: &SpanningTree, nt: &VertexSet) -> Option<(Degree2Path, Vertex, Vertex)> {
    for path in tree.to_graph().maximal_degree2_paths(nt) {
        if path.len() < 6 {
            continue;
        }
        for &v in path.strictly_internal() {
            if let Some(&w) = g.neighbors(v).iter().find(|&&w| !tree.has_edge(Edge::new(v, w))) {
                return Some((path, v, w));
            }
        }
    }
    None
}
