//! Pluggable kernels for the two single-tree problems the pipelines
//! delegate to once an instance is too large to keep:
//!
//! * max-internal spanning tree `(G, q)`: is there a spanning tree with at
//!   least `q` internal vertices? Conforming kernels output at most `2q`
//!   vertices.
//! * non-terminal spanning tree `(G, V_NT)`: is there a spanning tree in
//!   which every vertex of `V_NT` is internal? Conforming kernels output at
//!   most `3|V_NT|` vertices.
//!
//! The default [`ExactDecider`] solves the instance outright and answers
//! with a fixed tiny instance of the same verdict.

use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{generate, Graph, VertexSet};
use crate::spantree::{arbitrary_spanning_tree, for_each_spanning_tree, Enumeration, DEFAULT_TREE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MistInstance {
    pub graph: Graph,
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("non-terminal {vertex} out of range 1..={n}")]
pub struct NtOutOfRange {
    pub vertex: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NtstInstance {
    graph: Graph,
    nonterminals: VertexSet,
}

impl NtstInstance {
    pub fn new(graph: Graph, nonterminals: VertexSet) -> Result<NtstInstance, NtOutOfRange> {
        if let Some(&v) = nonterminals.iter().find(|&&v| !graph.contains_vertex(v)) {
            return Err(NtOutOfRange { vertex: v, n: graph.n() });
        }
        Ok(NtstInstance { graph, nonterminals })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn nonterminals(&self) -> &VertexSet {
        &self.nonterminals
    }
}

impl MistInstance {
    /// Whether the instance respects the `2q` vertex bound.
    pub fn within_bound(&self) -> bool {
        self.graph.n() <= 2 * self.q
    }
}

impl NtstInstance {
    /// Whether the instance respects the `3|V_NT|` vertex bound.
    pub fn within_bound(&self) -> bool {
        self.graph.n() <= 3 * self.nonterminals.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("black-box kernel unavailable: {reason}")]
pub struct Unavailable {
    pub reason: String,
}

impl Unavailable {
    fn new(reason: impl Into<String>) -> Unavailable {
        Unavailable { reason: reason.into() }
    }
}

/// A kernelization for the two delegated problems. Implementations must
/// return an equivalent instance.
pub trait KernelBlackBox: Send + Sync {
    fn name(&self) -> &str;
    fn mist_kernel(&self, inst: &MistInstance) -> Result<MistInstance, Unavailable>;
    fn ntst_kernel(&self, inst: &NtstInstance) -> Result<NtstInstance, Unavailable>;
}

/// Fixed answer instances: `(P_4, 2)` is a yes-instance and `(K_2, 2)` a
/// no-instance, both with at most `2q` vertices.
pub fn canonical_mist(yes: bool) -> MistInstance {
    if yes {
        MistInstance { graph: generate::path(4), q: 2 }
    } else {
        MistInstance { graph: generate::path(2), q: 2 }
    }
}

/// Fixed answer instances: `(P_3, {2})` is a yes-instance and
/// `(K_2, {1, 2})` a no-instance, both with at most `3|V_NT|` vertices.
pub fn canonical_ntst(yes: bool) -> NtstInstance {
    if yes {
        NtstInstance::new(generate::path(3), VertexSet::from([2])).unwrap()
    } else {
        NtstInstance::new(generate::path(2), VertexSet::from([1, 2])).unwrap()
    }
}

/// Decides instances exactly by spanning tree enumeration.
#[derive(Debug, Clone)]
pub struct ExactDecider {
    /// Maximum number of trees to enumerate before giving up.
    pub tree_budget: usize,
    /// Instances with more edges are declined unless a quick check settles them.
    pub max_edges: usize,
}

impl Default for ExactDecider {
    fn default() -> Self {
        ExactDecider::DEFAULT
    }
}

impl ExactDecider {
    pub const DEFAULT: ExactDecider = ExactDecider {
        tree_budget: DEFAULT_TREE_LIMIT,
        max_edges: 64,
    };

    /// Searches for a spanning tree satisfying `accept`; fails when the
    /// budget or edge cap prevents a complete answer.
    fn exists_tree(&self, g: &Graph, accept: impl Fn(&[u32]) -> bool) -> Result<bool, Unavailable> {
        if !g.is_connected() {
            return Ok(false);
        }
        if g.m() > self.max_edges {
            return Err(Unavailable::new(format!(
                "{} edges exceed the exact decider's cap of {}",
                g.m(),
                self.max_edges
            )));
        }
        let mut degree = vec![0u32; g.n() + 1];
        let mut found = false;
        let outcome = for_each_spanning_tree(g, self.tree_budget, |idx| {
            degree.iter_mut().for_each(|d| *d = 0);
            for &i in idx {
                let e = g.edges()[i];
                degree[e.u()] += 1;
                degree[e.v()] += 1;
            }
            if accept(&degree) {
                found = true;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        match outcome {
            Enumeration::Overflow { count } => Err(Unavailable::new(format!(
                "undecided after {count} spanning trees"
            ))),
            _ => Ok(found),
        }
    }

    pub fn decide_mist(&self, inst: &MistInstance) -> Result<bool, Unavailable> {
        let g = &inst.graph;
        if let Ok(t) = arbitrary_spanning_tree(g) {
            if t.internal_count() >= inst.q {
                return Ok(true);
            }
        }
        self.exists_tree(g, |deg| deg[1..].iter().filter(|&&d| d != 1).count() >= inst.q)
    }

    pub fn decide_ntst(&self, inst: &NtstInstance) -> Result<bool, Unavailable> {
        let g = &inst.graph;
        let nt = &inst.nonterminals;
        if nt.iter().any(|&v| g.degree(v) <= 1 && g.n() > 1) {
            return Ok(false);
        }
        if let Ok(t) = arbitrary_spanning_tree(g) {
            if nt.iter().all(|&v| t.is_internal(v)) {
                return Ok(true);
            }
        }
        self.exists_tree(g, |deg| nt.iter().all(|&v| deg[v] != 1))
    }
}

impl KernelBlackBox for ExactDecider {
    fn name(&self) -> &str {
        "exact"
    }

    fn mist_kernel(&self, inst: &MistInstance) -> Result<MistInstance, Unavailable> {
        self.decide_mist(inst).map(canonical_mist)
    }

    fn ntst_kernel(&self, inst: &NtstInstance) -> Result<NtstInstance, Unavailable> {
        self.decide_ntst(inst).map(canonical_ntst)
    }
}

/// Always unavailable; delegation then keeps the pre-delegation instance.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoBlackBox;

impl KernelBlackBox for NoBlackBox {
    fn name(&self) -> &str {
        "none"
    }

    fn mist_kernel(&self, _: &MistInstance) -> Result<MistInstance, Unavailable> {
        Err(Unavailable::new("no black-box kernel installed"))
    }

    fn ntst_kernel(&self, _: &NtstInstance) -> Result<NtstInstance, Unavailable> {
        Err(Unavailable::new("no black-box kernel installed"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mist(graph: Graph, q: usize) -> MistInstance {
        MistInstance { graph, q }
    }

    fn ntst(graph: Graph, nt: &[usize]) -> NtstInstance {
        NtstInstance::new(graph, nt.iter().copied().collect()).unwrap()
    }

    #[test]
    fn canonical_instances_have_the_right_answers_and_sizes() {
        let exact = ExactDecider::default();
        assert_eq!(exact.decide_mist(&canonical_mist(true)), Ok(true));
        assert_eq!(exact.decide_mist(&canonical_mist(false)), Ok(false));
        assert_eq!(exact.decide_ntst(&canonical_ntst(true)), Ok(true));
        assert_eq!(exact.decide_ntst(&canonical_ntst(false)), Ok(false));
        for yes in [true, false] {
            assert!(canonical_mist(yes).within_bound());
            assert!(canonical_ntst(yes).within_bound());
        }
    }

    #[test]
    fn mist_examples() {
        let exact = ExactDecider::default();
        assert_eq!(exact.mist_kernel(&mist(generate::cycle(5), 3)), Ok(canonical_mist(true)));
        assert_eq!(exact.mist_kernel(&mist(generate::star(4), 2)), Ok(canonical_mist(false)));
        // K_4 with q = 2: the arbitrary tree is a star, a path has two internal vertices
        assert_eq!(exact.decide_mist(&mist(generate::complete(4), 2)), Ok(true));
    }

    #[test]
    fn ntst_examples() {
        let exact = ExactDecider::default();
        assert_eq!(exact.ntst_kernel(&ntst(generate::cycle(4), &[1, 2])), Ok(canonical_ntst(true)));
        assert_eq!(exact.ntst_kernel(&ntst(generate::star(3), &[2])), Ok(canonical_ntst(false)));
    }

    #[test]
    fn budget_exhaustion() {
        let tight = ExactDecider {
            tree_budget: 1,
            max_edges: 64,
        };
        // every spanning tree of K_5 has at most 3 internal vertices
        assert!(tight.decide_mist(&mist(generate::complete(5), 4)).is_err());
        let capped = ExactDecider {
            tree_budget: 10,
            max_edges: 5,
        };
        assert!(capped.decide_mist(&mist(generate::complete(5), 4)).is_err());
        assert!(NoBlackBox.mist_kernel(&mist(generate::cycle(3), 1)).is_err());
        assert!(NoBlackBox.ntst_kernel(&ntst(generate::cycle(3), &[])).is_err());
    }
}
