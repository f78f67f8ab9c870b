//! Families of pairwise diverse spanning trees built by leaf swaps.
//!
//! Starting from a tree `T` and a set `L` of its leaves that have degree at
//! least two in the host, each leaf `v` gets a swap target `q_v`, a
//! non-tree neighbor. Swapping `v`'s tree edge for `v q_v` keeps a spanning
//! tree. Leaves whose targets avoid one another can be swapped
//! independently, so disjoint blocks of such leaves give trees at exact
//! pairwise distance `2 (|L_i| + |L_j|)`.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::dsu::Dsu;
use crate::graph::{Edge, Graph, Vertex, VertexSet};
use crate::instance::Constraints;
use crate::quarter_ceil;
use crate::spantree::{
    arbitrary_spanning_tree, grow_leaves, symmetric_difference, AugmentError, Growth, SpanningTree,
    TreeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiversifyError {
    #[error("tree does not belong to the given graph")]
    HostMismatch,
    #[error("graph needs at least 3 vertices, has {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} is not a leaf of the tree")]
    NotALeaf(Vertex),
    #[error("leaf {0} has degree 1 in the graph")]
    PendantLeaf(Vertex),
    #[error("need at least {need} swappable leaves, have {have}")]
    TooFewLeaves { have: usize, need: usize },
    #[error("k and ell must be at least 1")]
    ZeroParameter,
    #[error("conflict rotation at {0} did not remove an edge")]
    RotationFailed(Vertex),
    #[error("non-terminal {0} is a leaf of the tree")]
    NonterminalLeaf(Vertex),
    #[error("non-terminal {0} has fewer than two tree neighbors outside the swap set")]
    NonterminalExposed(Vertex),
    #[error("a tree with non-terminals internal is needed as a starting point")]
    MissingSeed,
    #[error("leaf growth stalled at {leaves} < {target} leaves (graph below {bound} vertices)")]
    GrowthStalled { leaves: usize, target: usize, bound: usize },
    #[error(transparent)]
    Growth(#[from] AugmentError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Swap targets, conflict forest and blocks for a set of leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafSwapPlan {
    tree: SpanningTree,
    leaves: Vec<Vertex>,
    p_of: BTreeMap<Vertex, Vertex>,
    q_of: BTreeMap<Vertex, Vertex>,
    conflict_edges: Vec<Edge>,
    independent: Vec<Vertex>,
    blocks: Vec<Vec<Vertex>>,
    rotations: usize,
}

impl LeafSwapPlan {
    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    /// The leaf set `L`, sorted.
    pub fn leaves(&self) -> &[Vertex] {
        &self.leaves
    }

    /// Tree neighbor of leaf `v`.
    pub fn p_of(&self, v: Vertex) -> Option<Vertex> {
        self.p_of.get(&v).copied()
    }

    /// Swap target of leaf `v`.
    pub fn q_of(&self, v: Vertex) -> Option<Vertex> {
        self.q_of.get(&v).copied()
    }

    /// Edges `uv` of the conflict graph on `L`: `u = q_v` or `v = q_u`.
    pub fn conflict_edges(&self) -> &[Edge] {
        &self.conflict_edges
    }

    /// Independent set of the conflict graph, sorted.
    pub fn independent(&self) -> &[Vertex] {
        &self.independent
    }

    pub fn blocks(&self) -> &[Vec<Vertex>] {
        &self.blocks
    }

    /// Number of target reassignments needed to make the conflicts acyclic.
    pub fn rotations(&self) -> usize {
        self.rotations
    }

    /// Whether the conflict graph is a forest.
    pub fn conflicts_acyclic(&self) -> bool {
        let mut dsu = Dsu::new(self.tree.n() + 1);
        self.conflict_edges.iter().all(|e| dsu.union(e.u(), e.v()))
    }
}

fn conflict_edges(leaves: &[Vertex], q_of: &BTreeMap<Vertex, Vertex>) -> Vec<Edge> {
    let mut edges: Vec<Edge> = leaves
        .iter()
        .filter(|&&v| q_of.contains_key(&q_of[&v]))
        .map(|&v| Edge::new(v, q_of[&v]))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Returns a cycle of the graph `edges` as a vertex sequence, if any.
fn find_cycle(n: usize, edges: &[Edge]) -> Option<Vec<Vertex>> {
    let mut dsu = Dsu::new(n + 1);
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n + 1];
    for e in edges {
        let (a, b) = (e.u(), e.v());
        if dsu.union(a, b) {
            adj[a].push(b);
            adj[b].push(a);
            continue;
        }
        // a and b are joined by a forest path; walk it back from b.
        let mut prev = vec![0; n + 1];
        let mut queue = VecDeque::from([a]);
        prev[a] = a;
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &y in &adj[x] {
                if prev[y] == 0 {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut cycle = vec![b];
        let mut x = b;
        while x != a {
            x = prev[x];
            cycle.push(x);
        }
        return Some(cycle);
    }
    None
}

/// Chooses swap targets for the leaves `l` of `t`, removes conflict cycles
/// and splits an independent set into `ell` blocks of `ceil(k/4)` leaves.
///
/// Targets start as the lowest-id neighbor other than the tree neighbor.
/// A conflict cycle is necessarily directed (`q_{c_i} = c_{i-1}` around
/// it); pointing one of its vertices forward instead removes exactly one
/// conflict edge, so the loop ends after at most `|L|` rotations.
pub fn plan_swaps(
    g: &Graph,
    t: &SpanningTree,
    l: &VertexSet,
    k: usize,
    ell: usize,
) -> Result<LeafSwapPlan, DiversifyError> {
    if !t.belongs_to(g) {
        return Err(DiversifyError::HostMismatch);
    }
    if g.n() < 3 {
        return Err(DiversifyError::TooFewVertices(g.n()));
    }
    if k == 0 || ell == 0 {
        return Err(DiversifyError::ZeroParameter);
    }
    let c = quarter_ceil(k);
    for &v in l {
        if !g.contains_vertex(v) || !t.is_leaf(v) {
            return Err(DiversifyError::NotALeaf(v));
        }
        if g.degree(v) < 2 {
            return Err(DiversifyError::PendantLeaf(v));
        }
    }
    if l.len() < 2 * c * ell {
        return Err(DiversifyError::TooFewLeaves {
            have: l.len(),
            need: 2 * c * ell,
        });
    }

    let adj = t.adjacency();
    let leaves: Vec<Vertex> = l.iter().copied().collect();
    let p_of: BTreeMap<Vertex, Vertex> = leaves.iter().map(|&v| (v, adj[v][0])).collect();
    let mut q_of: BTreeMap<Vertex, Vertex> = leaves
        .iter()
        .map(|&v| {
            let q = *g.neighbors(v).iter().find(|&&w| w != p_of[&v]).expect("degree at least two");
            (v, q)
        })
        .collect();

    let (edges, rotations) = break_conflict_cycles(g.n(), &leaves, &mut q_of)?;
    let independent = larger_color_class(g.n(), &leaves, &edges);
    let blocks: Vec<Vec<Vertex>> = independent[..c * ell].chunks(c).map(<[Vertex]>::to_vec).collect();
    Ok(LeafSwapPlan {
        tree: t.clone(),
        leaves,
        p_of,
        q_of,
        conflict_edges: edges,
        independent,
        blocks,
        rotations,
    })
}

/// Rotates targets on conflict cycles until the conflict graph is a forest;
/// returns the final conflict edges and the number of rotations.
///
/// Lowest-id initial targets never produce a cycle (the vertex after the
/// smallest one on a directed cycle would need a target below the minimum),
/// so this only acts on externally supplied targets.
fn break_conflict_cycles(
    n: usize,
    leaves: &[Vertex],
    q_of: &mut BTreeMap<Vertex, Vertex>,
) -> Result<(Vec<Edge>, usize), DiversifyError> {
    let mut edges = conflict_edges(leaves, q_of);
    let mut rotations = 0;
    while let Some(mut cycle) = find_cycle(n, &edges) {
        let r = cycle.len();
        let points_back = |cyc: &[Vertex], i: usize| q_of[&cyc[i]] == cyc[(i + r - 1) % r];
        if !(0..r).any(|i| points_back(&cycle, i)) {
            cycle.reverse();
        }
        let Some(i) = (0..r).find(|&i| points_back(&cycle, i)) else {
            return Err(DiversifyError::RotationFailed(cycle[0]));
        };
        let b = cycle[i];
        q_of.insert(b, cycle[(i + 1) % r]);
        let next = conflict_edges(leaves, q_of);
        if next.len() + 1 != edges.len() {
            return Err(DiversifyError::RotationFailed(b));
        }
        edges = next;
        rotations += 1;
    }
    Ok((edges, rotations))
}

/// Two-colors the forest on `vertices` by breadth-first search from each
/// uncolored vertex in increasing order and returns the larger class
/// (the class of the smallest vertex on ties), sorted.
fn larger_color_class(n: usize, vertices: &[Vertex], edges: &[Edge]) -> Vec<Vertex> {
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n + 1];
    for e in edges {
        adj[e.u()].push(e.v());
        adj[e.v()].push(e.u());
    }
    let mut color: Vec<Option<bool>> = vec![None; n + 1];
    let mut classes = [Vec::new(), Vec::new()];
    for &root in vertices {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let cx = color[x].unwrap();
            classes[usize::from(cx)].push(x);
            for &y in &adj[x] {
                if color[y].is_none() {
                    color[y] = Some(!cx);
                    queue.push_back(y);
                }
            }
        }
    }
    let [mut a, mut b] = classes;
    a.sort_unstable();
    b.sort_unstable();
    if b.len() > a.len() {
        b
    } else {
        a
    }
}

/// Builds `T_i = T + {v q_v} - {v p_v : v in L_i}` for every block `L_i`.
pub fn build_diverse_family(
    g: &Graph,
    plan: &LeafSwapPlan,
    nt: &VertexSet,
) -> Result<Vec<SpanningTree>, DiversifyError> {
    let t = &plan.tree;
    if !t.belongs_to(g) {
        return Err(DiversifyError::HostMismatch);
    }
    let adj = t.adjacency();
    for &v in nt {
        if !g.contains_vertex(v) || !t.is_internal(v) {
            return Err(DiversifyError::NonterminalLeaf(v));
        }
        let outside = adj[v].iter().filter(|w| plan.leaves.binary_search(w).is_err()).count();
        if outside < 2 {
            return Err(DiversifyError::NonterminalExposed(v));
        }
    }
    plan.blocks
        .iter()
        .map(|block| {
            let drop: Vec<Edge> = block.iter().map(|&v| Edge::new(v, plan.p_of[&v])).collect();
            let edges = t
                .edges()
                .iter()
                .copied()
                .filter(|e| !drop.contains(e))
                .chain(block.iter().map(|&v| Edge::new(v, plan.q_of[&v])));
            SpanningTree::new(g, edges).map_err(DiversifyError::from)
        })
        .collect()
}

/// Everything produced while constructing a family from scratch.
#[derive(Debug, Clone)]
pub struct Construction {
    pub seed: SpanningTree,
    pub grown: SpanningTree,
    pub plan: LeafSwapPlan,
    pub family: Vec<SpanningTree>,
}

/// Grows a tree to `2 ceil(k/4) ell + 2|nt|` leaves, picks swappable leaves
/// away from two tree neighbors of every non-terminal, and builds `ell`
/// pairwise `k`-diverse trees with every non-terminal internal.
///
/// `g` must have no degree-2-path of length `ell + 3` or more avoiding `nt`
/// internally. With `nt` empty the seed defaults to
/// [`arbitrary_spanning_tree`]; otherwise a seed with `nt` internal is
/// required.
pub fn construct_family(
    g: &Graph,
    nt: &VertexSet,
    k: usize,
    ell: usize,
    seed: Option<&SpanningTree>,
) -> Result<Construction, DiversifyError> {
    if k == 0 || ell == 0 {
        return Err(DiversifyError::ZeroParameter);
    }
    if g.n() < 3 {
        return Err(DiversifyError::TooFewVertices(g.n()));
    }
    let seed = match seed {
        Some(t) => t.clone(),
        None if nt.is_empty() => arbitrary_spanning_tree(g)?,
        None => return Err(DiversifyError::MissingSeed),
    };
    let target = 2 * quarter_ceil(k) * ell + 2 * nt.len();
    let grown = match grow_leaves(g, &seed, nt, target, ell + 3)? {
        Growth::Reached { tree, .. } => tree,
        Growth::Small { tree, bound } => {
            return Err(DiversifyError::GrowthStalled {
                leaves: tree.leaf_count(),
                target,
                bound,
            })
        }
    };
    let adj = grown.adjacency();
    let guarded: VertexSet = nt.iter().flat_map(|&v| adj[v].iter().take(2).copied()).collect();
    let l: VertexSet = grown
        .leaves()
        .into_iter()
        .filter(|v| !guarded.contains(v) && g.degree(*v) >= 2)
        .collect();
    let plan = plan_swaps(g, &grown, &l, k, ell)?;
    let family = build_diverse_family(g, &plan, nt)?;
    Ok(Construction {
        seed,
        grown,
        plan,
        family,
    })
}

/// Per-tree entry of a [`FamilyReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeCheck {
    pub index: usize,
    pub spanning: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub leaves: usize,
    pub internal: usize,
    pub leaves_ok: bool,
    pub internal_ok: bool,
    pub nonterminals_ok: bool,
}

/// Per-pair entry of a [`FamilyReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub distance: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub passed: bool,
    pub size: usize,
    pub required: usize,
    pub size_ok: bool,
    pub trees: Vec<TreeCheck>,
    pub pairs: Vec<PairCheck>,
}

/// Checks arbitrary edge sets against the constraints. Failures are report
/// entries; the family must contain at least `c.ell` members.
pub fn verify_family(g: &Graph, family: &[Vec<Edge>], c: &Constraints) -> FamilyReport {
    let mut normalized: Vec<Vec<Edge>> = Vec::with_capacity(family.len());
    let mut trees = Vec::with_capacity(family.len());
    for (index, edges) in family.iter().enumerate() {
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let check = match SpanningTree::new(g, sorted.iter().copied()) {
            Ok(t) => TreeCheck {
                index,
                spanning: true,
                error: None,
                leaves: t.leaf_count(),
                internal: t.internal_count(),
                leaves_ok: t.leaf_count() >= c.p,
                internal_ok: t.internal_count() >= c.q,
                nonterminals_ok: c.nonterminals.iter().all(|&v| v <= t.n() && t.is_internal(v)),
            },
            Err(e) => TreeCheck {
                index,
                spanning: false,
                error: Some(e.to_string()),
                leaves: 0,
                internal: 0,
                leaves_ok: false,
                internal_ok: false,
                nonterminals_ok: false,
            },
        };
        trees.push(check);
        normalized.push(sorted);
    }
    let mut pairs = Vec::new();
    for i in 0..normalized.len() {
        for j in i + 1..normalized.len() {
            let distance = symmetric_difference(&normalized[i], &normalized[j]);
            pairs.push(PairCheck {
                i,
                j,
                distance,
                ok: distance >= c.k,
            });
        }
    }
    let size_ok = family.len() >= c.ell;
    let passed = size_ok
        && trees
            .iter()
            .all(|t| t.spanning && t.leaves_ok && t.internal_ok && t.nonterminals_ok)
        && pairs.iter().all(|p| p.ok);
    FamilyReport {
        passed,
        size: family.len(),
        required: c.ell,
        size_ok,
        trees,
        pairs,
    }
}

/// [`verify_family`] for already validated trees.
pub fn verify_trees(g: &Graph, family: &[SpanningTree], c: &Constraints) -> FamilyReport {
    let raw: Vec<Vec<Edge>> = family.iter().map(|t| t.edges().to_vec()).collect();
    verify_family(g, &raw, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use crate::spantree::enumerate_spanning_trees;

    fn e(u: Vertex, v: Vertex) -> Edge {
        Edge::new(u, v)
    }

    fn constraints(p: usize, q: usize, k: usize, ell: usize) -> Constraints {
        Constraints {
            p,
            q,
            k,
            ell,
            nonterminals: VertexSet::new(),
        }
    }

    #[test]
    fn star_in_k4() {
        let k4 = generate::complete(4);
        let star = SpanningTree::new(&k4, [e(1, 2), e(1, 3), e(1, 4)]).unwrap();
        let plan = plan_swaps(&k4, &star, &VertexSet::from([2, 3]), 2, 1).unwrap();
        // lowest targets are 3 for leaf 2 and 2 for leaf 3: one conflict edge
        assert_eq!(plan.q_of(2), Some(3));
        assert_eq!(plan.q_of(3), Some(2));
        assert_eq!(plan.conflict_edges(), &[e(2, 3)]);
        assert!(plan.conflicts_acyclic());
        assert_eq!(plan.independent(), &[2]);
        assert_eq!(plan.blocks(), &[vec![2]]);
        assert!(matches!(
            plan_swaps(&k4, &star, &VertexSet::from([2, 3]), 2, 2),
            Err(DiversifyError::TooFewLeaves { have: 2, need: 4 })
        ));
    }

    #[test]
    fn star_in_k4_with_disjoint_targets() {
        // With q_2 = q_3 = 4 the conflict graph is edgeless.
        let k4 = generate::complete(4);
        let star = SpanningTree::new(&k4, [e(1, 2), e(1, 3), e(1, 4)]).unwrap();
        let plan = LeafSwapPlan {
            tree: star.clone(),
            leaves: vec![2, 3],
            p_of: BTreeMap::from([(2, 1), (3, 1)]),
            q_of: BTreeMap::from([(2, 4), (3, 4)]),
            conflict_edges: vec![],
            independent: vec![2, 3],
            blocks: vec![vec![2], vec![3]],
            rotations: 0,
        };
        let fam = build_diverse_family(&k4, &plan, &VertexSet::new()).unwrap();
        assert_eq!(fam[0].edges(), &[e(1, 3), e(1, 4), e(2, 4)]);
        assert_eq!(fam[1].edges(), &[e(1, 2), e(1, 4), e(3, 4)]);
        assert_eq!(fam[0].hamming(&fam[1]), Ok(4));
        assert!(verify_trees(&k4, &fam, &constraints(0, 0, 2, 2)).passed);
    }

    #[test]
    fn leaves_forming_triangles() {
        // star at 1; leaves 2,3,4 and 5,6,7 are each joined in a triangle
        let g = Graph::new(
            7,
            [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (2, 3), (3, 4), (2, 4), (5, 6), (6, 7), (5, 7)],
        )
        .unwrap();
        let star = SpanningTree::new(&g, (2..=7).map(|v| e(1, v))).unwrap();
        let l = VertexSet::from([2, 3, 4, 5, 6, 7]);
        let plan = plan_swaps(&g, &star, &l, 4, 3).unwrap();
        assert!(plan.conflicts_acyclic());
        assert!(plan.independent().len() * 2 >= l.len());
        for &v in plan.independent() {
            assert!(!plan.independent().contains(&plan.q_of(v).unwrap()));
        }
        let fam = build_diverse_family(&g, &plan, &VertexSet::new()).unwrap();
        assert_eq!(fam.len(), 3);
        for i in 0..3 {
            for j in i + 1..3 {
                assert_eq!(fam[i].hamming(&fam[j]), Ok(4));
            }
            assert_eq!(fam[i].hamming(&star), Ok(2));
        }
    }

    #[test]
    fn rotation_on_directed_conflict_cycle() {
        // 2 -> 4 -> 3 -> 2 plus a tail 5 -> 2
        let mut q_of = BTreeMap::from([(2, 4), (3, 2), (4, 3), (5, 2)]);
        let leaves = vec![2, 3, 4, 5];
        let edges = conflict_edges(&leaves, &q_of);
        assert_eq!(edges.len(), 4);
        assert_eq!(find_cycle(5, &edges).unwrap().len(), 3);
        let (after, rotations) = break_conflict_cycles(5, &leaves, &mut q_of).unwrap();
        assert_eq!(rotations, 1);
        assert_eq!(after.len(), 3);
        assert!(find_cycle(5, &after).is_none());
    }

    #[test]
    fn single_tree_family() {
        let c6 = generate::cycle(6);
        let t = arbitrary_spanning_tree(&c6).unwrap();
        let plan = plan_swaps(&c6, &t, &t.leaves(), 1, 1).unwrap();
        let fam = build_diverse_family(&c6, &plan, &VertexSet::new()).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].hamming(&t), Ok(2));
    }

    #[test]
    fn nonterminal_guards() {
        let k4 = generate::complete(4);
        let star = SpanningTree::new(&k4, [e(1, 2), e(1, 3), e(1, 4)]).unwrap();
        let plan = plan_swaps(&k4, &star, &VertexSet::from([2, 3]), 1, 1).unwrap();
        assert_eq!(
            build_diverse_family(&k4, &plan, &VertexSet::from([2])),
            Err(DiversifyError::NonterminalLeaf(2))
        );
        assert_eq!(
            build_diverse_family(&k4, &plan, &VertexSet::from([1])),
            Err(DiversifyError::NonterminalExposed(1))
        );
    }

    #[test]
    fn cycle_family_verification() {
        let c5 = generate::cycle(5);
        let fam = enumerate_spanning_trees(&c5, 100).unwrap();
        assert!(verify_trees(&c5, &fam, &constraints(2, 3, 2, 5)).passed);
        let report = verify_trees(&c5, &fam, &constraints(2, 3, 3, 5));
        assert!(!report.passed);
        assert!(report.pairs.iter().all(|p| p.distance == 2));

        let mut raw: Vec<Vec<Edge>> = fam.iter().map(|t| t.edges().to_vec()).collect();
        raw[0] = vec![e(1, 2), e(2, 3), e(1, 3), e(4, 5)];
        let report = verify_family(&c5, &raw, &constraints(0, 0, 1, 1));
        assert!(!report.passed);
        assert!(!report.trees[0].spanning);
        assert!(!verify_trees(&c5, &fam[..2], &constraints(0, 0, 1, 3)).size_ok);
    }

    #[test]
    fn construct_on_prism() {
        let g = generate::cube_like(60).unwrap();
        let built = construct_family(&g, &VertexSet::new(), 4, 2, None).unwrap();
        assert!(built.grown.leaf_count() >= 4);
        assert!(verify_trees(&g, &built.family, &constraints(0, 0, 4, 2)).passed);
        assert!(matches!(
            construct_family(&g, &VertexSet::from([1]), 4, 2, None),
            Err(DiversifyError::MissingSeed)
        ));
    }
}
