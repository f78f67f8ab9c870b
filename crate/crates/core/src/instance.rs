//! Problem instances for the two constrained diverse spanning tree problems.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("k must be at least 1")]
    ZeroDiversity,
    #[error("ell must be at least 1")]
    ZeroTrees,
    #[error("{name} = {value} exceeds the vertex count {n}")]
    ParameterTooLarge { name: &'static str, value: usize, n: usize },
    #[error("non-terminal {vertex} out of range 1..={n}")]
    NonterminalOutOfRange { vertex: Vertex, n: usize },
}

/// Per-tree and pairwise requirements shared by both problems.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Constraints {
    /// Minimum number of leaves per tree.
    pub p: usize,
    /// Minimum number of internal vertices per tree.
    pub q: usize,
    /// Minimum pairwise symmetric difference.
    pub k: usize,
    /// Number of trees.
    pub ell: usize,
    /// Vertices that must be internal in every tree.
    pub nonterminals: VertexSet,
}

fn check_common(graph: &Graph, p: usize, k: usize, ell: usize) -> Result<(), InstanceError> {
    if k == 0 {
        return Err(InstanceError::ZeroDiversity);
    }
    if ell == 0 {
        return Err(InstanceError::ZeroTrees);
    }
    if p > graph.n() {
        return Err(InstanceError::ParameterTooLarge { name: "p", value: p, n: graph.n() });
    }
    Ok(())
}

/// Leaf & internal constrained instance `(G, p, q, k, ell)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr", into = "InstanceRepr")]
pub struct Instance {
    graph: Graph,
    p: usize,
    q: usize,
    k: usize,
    ell: usize,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    graph: Graph,
    p: usize,
    q: usize,
    k: usize,
    ell: usize,
}

impl TryFrom<InstanceRepr> for Instance {
    type Error = InstanceError;
    fn try_from(r: InstanceRepr) -> Result<Self, Self::Error> {
        Instance::new(r.graph, r.p, r.q, r.k, r.ell)
    }
}

impl From<Instance> for InstanceRepr {
    fn from(i: Instance) -> Self {
        InstanceRepr { graph: i.graph, p: i.p, q: i.q, k: i.k, ell: i.ell }
    }
}

impl Instance {
    pub fn new(graph: Graph, p: usize, q: usize, k: usize, ell: usize) -> Result<Self, InstanceError> {
        check_common(&graph, p, k, ell)?;
        if q > graph.n() {
            return Err(InstanceError::ParameterTooLarge { name: "q", value: q, n: graph.n() });
        }
        Ok(Instance { graph, p, q, k, ell })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn constraints(&self) -> Constraints {
        Constraints {
            p: self.p,
            q: self.q,
            k: self.k,
            ell: self.ell,
            nonterminals: VertexSet::new(),
        }
    }
}

/// Leaf & non-terminal constrained instance `(G, V_NT, p, k, ell)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceNtRepr", into = "InstanceNtRepr")]
pub struct InstanceNT {
    graph: Graph,
    nonterminals: VertexSet,
    p: usize,
    k: usize,
    ell: usize,
}

#[derive(Serialize, Deserialize)]
struct InstanceNtRepr {
    graph: Graph,
    nonterminals: VertexSet,
    p: usize,
    k: usize,
    ell: usize,
}

impl TryFrom<InstanceNtRepr> for InstanceNT {
    type Error = InstanceError;
    fn try_from(r: InstanceNtRepr) -> Result<Self, Self::Error> {
        InstanceNT::new(r.graph, r.nonterminals, r.p, r.k, r.ell)
    }
}

impl From<InstanceNT> for InstanceNtRepr {
    fn from(i: InstanceNT) -> Self {
        InstanceNtRepr {
            graph: i.graph,
            nonterminals: i.nonterminals,
            p: i.p,
            k: i.k,
            ell: i.ell,
        }
    }
}

impl InstanceNT {
    pub fn new(
        graph: Graph,
        nonterminals: VertexSet,
        p: usize,
        k: usize,
        ell: usize,
    ) -> Result<Self, InstanceError> {
        check_common(&graph, p, k, ell)?;
        if let Some(&v) = nonterminals.iter().find(|&&v| !graph.contains_vertex(v)) {
            return Err(InstanceError::NonterminalOutOfRange { vertex: v, n: graph.n() });
        }
        Ok(InstanceNT { graph, nonterminals, p, k, ell })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn nonterminals(&self) -> &VertexSet {
        &self.nonterminals
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn constraints(&self) -> Constraints {
        Constraints {
            p: self.p,
            q: 0,
            k: self.k,
            ell: self.ell,
            nonterminals: self.nonterminals.clone(),
        }
    }
}
