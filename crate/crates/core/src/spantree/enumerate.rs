//! Exhaustive spanning tree enumeration.
//!
//! Edges are decided in index order: an edge is either taken (if it joins
//! two components of the chosen forest) or skipped (if the remaining
//! candidates still connect its endpoints). Every branch therefore ends in
//! exactly one spanning tree and no tree is produced twice.

use std::ops::ControlFlow;

use thiserror::Error;

use super::SpanningTree;
use crate::dsu::RollbackDsu;
use crate::graph::Graph;

pub const DEFAULT_TREE_LIMIT: usize = 200_000;

/// More than `limit` spanning trees exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("more than {limit} spanning trees")]
pub struct Overflow {
    pub limit: usize,
}

/// How a streaming enumeration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// Every spanning tree was visited.
    Complete { count: usize },
    /// The callback asked to stop.
    Stopped { count: usize },
    /// `limit` trees were visited and at least one more exists.
    Overflow { count: usize },
}

impl Enumeration {
    pub fn count(self) -> usize {
        match self {
            Enumeration::Complete { count }
            | Enumeration::Stopped { count }
            | Enumeration::Overflow { count } => count,
        }
    }
}

struct Walker<'a, F> {
    g: &'a Graph,
    dsu: RollbackDsu,
    chosen: Vec<usize>,
    limit: usize,
    count: usize,
    visit: F,
}

enum Halt {
    Stopped,
    Overflow,
}

impl<F> Walker<'_, F>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    fn rec(&mut self, i: usize) -> Result<(), Halt> {
        let need = self.g.n() - 1;
        if self.chosen.len() == need {
            if self.count == self.limit {
                return Err(Halt::Overflow);
            }
            self.count += 1;
            return match (self.visit)(&self.chosen) {
                ControlFlow::Continue(()) => Ok(()),
                ControlFlow::Break(()) => Err(Halt::Stopped),
            };
        }
        let edges = self.g.edges();
        if edges.len() - i < need - self.chosen.len() {
            return Ok(());
        }
        let e = edges[i];
        let joined = self.dsu.find(e.u()) == self.dsu.find(e.v());
        if !joined {
            self.dsu.union(e.u(), e.v());
            self.chosen.push(i);
            let r = self.rec(i + 1);
            self.chosen.pop();
            self.dsu.rollback();
            r?;
        }
        if joined || self.still_connected_without(i) {
            self.rec(i + 1)?;
        }
        Ok(())
    }

    /// Whether the chosen forest plus the edges after `i` connect the
    /// endpoints of edge `i`.
    fn still_connected_without(&self, i: usize) -> bool {
        let edges = self.g.edges();
        let mut d = self.dsu.snapshot();
        let (a, b) = (edges[i].u(), edges[i].v());
        for e in &edges[i + 1..] {
            d.union(e.u(), e.v());
            if d.find(a) == d.find(b) {
                return true;
            }
        }
        d.find(a) == d.find(b)
    }
}

/// Calls `visit` with the sorted edge indices (into [`Graph::edges`]) of
/// every spanning tree, in a fixed order, until it breaks or `limit` trees
/// have been visited. A disconnected graph has no spanning trees.
pub fn for_each_spanning_tree<F>(g: &Graph, limit: usize, visit: F) -> Enumeration
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if !g.is_connected() {
        return Enumeration::Complete { count: 0 };
    }
    let mut w = Walker {
        g,
        dsu: RollbackDsu::new(g.n() + 1),
        chosen: Vec::with_capacity(g.n()),
        limit,
        count: 0,
        visit,
    };
    match w.rec(0) {
        Ok(()) => Enumeration::Complete { count: w.count },
        Err(Halt::Stopped) => Enumeration::Stopped { count: w.count },
        Err(Halt::Overflow) => Enumeration::Overflow { count: w.count },
    }
}

/// Collects all spanning trees, or reports that there are more than `limit`.
pub fn enumerate_spanning_trees(g: &Graph, limit: usize) -> Result<Vec<SpanningTree>, Overflow> {
    let mut trees = Vec::new();
    let outcome = for_each_spanning_tree(g, limit, |idx| {
        let edges = idx.iter().map(|&i| g.edges()[i]).collect();
        trees.push(SpanningTree::from_sorted_unchecked(g, edges));
        ControlFlow::Continue(())
    });
    match outcome {
        Enumeration::Overflow { .. } => Err(Overflow { limit }),
        _ => Ok(trees),
    }
}
