use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, Reshaped, Vertex, VertexSet};

/// A walk `(v_0, ..., v_r)` whose internal vertices all have degree two in
/// the host graph. Vertices are distinct except that `v_0 = v_r` is allowed,
/// in which case the path is closed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree2Path {
    vertices: Vec<Vertex>,
}

impl Degree2Path {
    /// Wraps a vertex sequence without checking it against any host; see
    /// [`Degree2Path::validate_in`].
    pub fn from_vertices(vertices: Vec<Vertex>) -> Degree2Path {
        Degree2Path { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.len() > 1 && self.vertices[0] == self.vertices[self.vertices.len() - 1]
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn internal(&self) -> &[Vertex] {
        if self.vertices.len() < 2 {
            return &[];
        }
        &self.vertices[1..self.vertices.len() - 1]
    }

    /// `v_3, ..., v_{r-3}`; empty unless the length is at least 6.
    pub fn strictly_internal(&self) -> &[Vertex] {
        let r = self.len();
        if r < 6 {
            return &[];
        }
        &self.vertices[3..=r - 3]
    }

    /// Position of `v` among the vertices (the first one for a closed path's anchor).
    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    /// Checks that the sequence is a degree-2-path of `host`.
    pub fn validate_in(&self, host: &Graph) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidPath(msg));
        if self.vertices.len() < 2 {
            return bad("a path needs at least one edge".into());
        }
        for &v in &self.vertices {
            if !host.contains_vertex(v) {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: host.n() });
            }
        }
        for w in self.vertices.windows(2) {
            if !host.has_edge(w[0], w[1]) {
                return bad(format!("{} and {} are not adjacent", w[0], w[1]));
            }
        }
        for &v in self.internal() {
            if host.degree(v) != 2 {
                return bad(format!("internal vertex {v} has degree {}", host.degree(v)));
            }
        }
        let body = if self.is_closed() {
            &self.vertices[..self.vertices.len() - 1]
        } else {
            &self.vertices[..]
        };
        let mut seen: Vec<Vertex> = body.to_vec();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return bad("repeated vertex".into());
        }
        if self.is_closed() && self.len() < 3 {
            return bad("closed path shorter than a triangle".into());
        }
        Ok(())
    }
}

impl Graph {
    /// All inclusion-maximal degree-2-paths whose internal vertices have
    /// degree two and lie outside `forbidden`.
    ///
    /// Every allowed degree-2 vertex is internal to exactly one returned path.
    /// Paths with no internal vertex (plain edges) are not reported. Open paths
    /// are oriented so that `start <= end`; closed paths start at their anchor
    /// (a forbidden or high-degree vertex, or the smallest id of a pure cycle)
    /// and continue towards the smaller of the anchor's two path neighbors.
    /// The result is sorted.
    pub fn maximal_degree2_paths(&self, forbidden: &VertexSet) -> Vec<Degree2Path> {
        let allowed = |v: Vertex| self.degree(v) == 2 && !forbidden.contains(&v);
        let mut visited = vec![false; self.n() + 1];
        let mut paths = Vec::new();

        for start in self.vertices() {
            if visited[start] || !allowed(start) {
                continue;
            }
            let (a, b) = (self.neighbors(start)[0], self.neighbors(start)[1]);
            let left = self.walk_degree2(start, a, &allowed);
            let mut vertices: Vec<Vertex>;
            if *left.last().unwrap() == start {
                // Pure cycle component; `start` is its smallest vertex.
                vertices = Vec::with_capacity(left.len() + 1);
                vertices.push(start);
                vertices.extend_from_slice(&left);
            } else {
                let right = self.walk_degree2(start, b, &allowed);
                vertices = left.into_iter().rev().collect();
                vertices.push(start);
                vertices.extend(right);
            }
            for &v in &vertices[1..vertices.len() - 1] {
                visited[v] = true;
            }
            let (first, last) = (vertices[0], vertices[vertices.len() - 1]);
            let flip = if first == last {
                vertices[1] > vertices[vertices.len() - 2]
            } else {
                first > last
            };
            if flip {
                vertices.reverse();
            }
            paths.push(Degree2Path { vertices });
        }
        paths.sort();
        paths
    }

    /// Walks from `from` through `next` while the current vertex is allowed,
    /// returning the visited sequence starting with `next`. Stops on
    /// returning to `from`.
    fn walk_degree2(
        &self,
        from: Vertex,
        next: Vertex,
        allowed: &impl Fn(Vertex) -> bool,
    ) -> Vec<Vertex> {
        let mut seq = vec![next];
        let (mut prev, mut cur) = (from, next);
        while cur != from && allowed(cur) {
            let nb = self.neighbors(cur);
            let step = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = step;
            seq.push(cur);
        }
        seq
    }

    /// Contracts the edge between the first two internal vertices of `path`.
    ///
    /// Open paths need length at least 3 and closed ones at least 4, so the
    /// contraction never produces a parallel edge.
    pub fn contract_path_edge(&self, path: &Degree2Path) -> Result<Reshaped, GraphError> {
        path.validate_in(self)?;
        let min_len = if path.is_closed() { 4 } else { 3 };
        if path.len() < min_len {
            return Err(GraphError::PathTooShort(path.len()));
        }
        let v = path.vertices();
        self.contract_edge(v[1], v[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    fn set(vs: &[Vertex]) -> VertexSet {
        vs.iter().copied().collect()
    }

    fn path(vs: &[Vertex]) -> Degree2Path {
        Degree2Path::from_vertices(vs.to_vec())
    }

    #[test]
    fn triangle_with_long_handle() {
        // triangle 1-2-3, handle 3-4-5-6-1
        let g = Graph::new(6, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 1)]).unwrap();
        let paths = g.maximal_degree2_paths(&VertexSet::new());
        // vertex 2 also has degree two, so the short side is its own path.
        assert_eq!(paths, vec![path(&[1, 2, 3]), path(&[1, 6, 5, 4, 3])]);
        assert_eq!(paths[1].len(), 4);
        assert!(!paths[1].is_closed());
    }

    #[test]
    fn pure_cycle_is_one_closed_path() {
        let paths = generate::cycle(6).maximal_degree2_paths(&VertexSet::new());
        assert_eq!(paths, vec![path(&[1, 2, 3, 4, 5, 6, 1])]);
        assert!(paths[0].is_closed());
        assert_eq!(paths[0].len(), 6);
    }

    #[test]
    fn forbidden_vertex_anchors_the_cycle() {
        let forbidden = set(&[3]);
        let paths = generate::cycle(6).maximal_degree2_paths(&forbidden);
        assert_eq!(paths, vec![path(&[3, 2, 1, 6, 5, 4, 3])]);
        assert!(paths[0].is_closed());
        let mut internal = paths[0].internal().to_vec();
        internal.sort_unstable();
        assert_eq!(internal, vec![1, 2, 4, 5, 6]);
    }

    #[test]
    fn two_forbidden_vertices_split_the_cycle() {
        let paths = generate::cycle(6).maximal_degree2_paths(&set(&[2, 5]));
        assert_eq!(paths, vec![path(&[2, 1, 6, 5]), path(&[2, 3, 4, 5])]);
    }

    #[test]
    fn adjacent_branch_vertices_give_no_path() {
        let k4 = generate::complete(4);
        assert!(k4.maximal_degree2_paths(&VertexSet::new()).is_empty());
    }

    #[test]
    fn strictly_internal_needs_length_six() {
        assert!(path(&[1, 2, 3, 4, 5, 6]).strictly_internal().is_empty());
        assert_eq!(path(&[1, 2, 3, 4, 5, 6, 7]).strictly_internal(), &[4]);
        assert_eq!(path(&[1, 2, 3, 4, 5, 6, 7, 8]).strictly_internal(), &[4, 5]);
    }

    #[test]
    fn contract_cycle() {
        let c5 = generate::cycle(5);
        let p = &c5.maximal_degree2_paths(&VertexSet::new())[0];
        let r = c5.contract_path_edge(p).unwrap();
        assert_eq!(r.graph, generate::cycle(4));
        assert_eq!(r.graph.n(), 4);
        assert_eq!(r.graph.m(), 4);
    }

    #[test]
    fn contract_shortens_a_handle() {
        // triangle 1-2-3 with path 3-4-5-6-7, 7 pendant
        let g = Graph::new(7, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6), (6, 7)]).unwrap();
        let p = path(&[3, 4, 5, 6, 7]);
        let r = g.contract_path_edge(&p).unwrap();
        let expected = Graph::new(6, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
        assert_eq!(r.graph, expected);
        assert_eq!(r.graph.n(), g.n() - 1);
        assert_eq!(r.graph.m(), g.m() - 1);
    }

    #[test]
    fn contract_rejects_short_or_invalid_paths() {
        let c3 = generate::cycle(3);
        let p = &c3.maximal_degree2_paths(&VertexSet::new())[0];
        assert_eq!(c3.contract_path_edge(p).unwrap_err(), GraphError::PathTooShort(3));

        let p4 = generate::path(4);
        assert_eq!(
            p4.contract_path_edge(&path(&[1, 2, 3])).unwrap_err(),
            GraphError::PathTooShort(2)
        );
        assert!(matches!(
            generate::complete(4).contract_path_edge(&path(&[1, 2, 3, 4])),
            Err(GraphError::InvalidPath(_))
        ));
    }
}
