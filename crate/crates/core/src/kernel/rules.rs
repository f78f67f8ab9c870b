//! The rules as in-place operations on a working copy of an instance.
//!
//! Each `try_*` function either performs one application and returns its
//! transcript entry, or leaves the instance untouched and returns `None`.

use crate::graph::{Degree2Path, Graph, Vertex, VertexSet};
use crate::quarter_ceil;

use super::transcript::{Change, Rule, RuleApplication, Threshold};

/// Instance data shared by both problems; `q` is zero and `nt` empty where
/// a problem has no such parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Work {
    pub graph: Graph,
    pub p: usize,
    pub q: usize,
    pub k: usize,
    pub ell: usize,
    pub nt: VertexSet,
}

fn change(from: usize, to: usize) -> Option<Change> {
    Some(Change { from, to })
}

impl Work {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Connected and not a tree: the precondition of every graph rule.
    pub fn is_cyclic(&self) -> bool {
        self.graph.is_connected() && !self.graph.is_tree()
    }

    pub fn pendant_count(&self) -> usize {
        self.graph.vertices().filter(|&v| self.graph.degree(v) == 1).count()
    }

    pub fn has_nt_pendant(&self) -> bool {
        self.nt.iter().any(|&v| self.graph.degree(v) == 1)
    }

    /// The first maximal degree-2-path of length at least `ell + 3` whose
    /// internal vertices avoid the non-terminals.
    pub fn long_path(&self) -> Option<Degree2Path> {
        let min = self.ell + 3;
        self.graph
            .maximal_degree2_paths(&self.nt)
            .into_iter()
            .find(|p| p.len() >= min)
    }

    /// The lowest vertex with two pendant neighbors, and its lowest pendant neighbor.
    pub fn twin_pendant(&self) -> Option<(Vertex, Vertex)> {
        self.graph.vertices().find_map(|u| {
            let mut pendants = self.graph.neighbors(u).iter().filter(|&&x| self.graph.degree(x) == 1);
            let x = *pendants.next()?;
            pendants.next().map(|_| (x, u))
        })
    }

    pub fn first_pendant(&self) -> Option<(Vertex, Vertex)> {
        self.graph
            .vertices()
            .find(|&v| self.graph.degree(v) == 1)
            .map(|v| (v, self.graph.neighbors(v)[0]))
    }

    fn contract(&mut self, rule: Rule, path: &Degree2Path) -> RuleApplication {
        let v = path.vertices();
        let shaped = self
            .graph
            .contract_path_edge(path)
            .expect("long maximal paths are contractible");
        let mut app = RuleApplication::new(rule);
        app.touched = v[..4].to_vec();
        if rule == Rule::ContractPath {
            let to = self.q.saturating_sub(1);
            app.q = change(self.q, to);
            self.q = to;
        }
        app.renaming = Some(shaped.renaming);
        self.nt = self.nt.iter().filter_map(|&x| shaped.renaming.apply(x)).collect();
        self.graph = shaped.graph;
        app
    }

    fn delete(&mut self, rule: Rule, x: Vertex, nbr: Vertex) -> RuleApplication {
        let shaped = self.graph.delete_vertex(x).expect("pendant vertices are deletable");
        let mut app = RuleApplication::new(rule);
        app.touched = vec![x, nbr];
        app.renaming = Some(shaped.renaming);
        match rule {
            Rule::TwinPendant => {
                let to = self.p.saturating_sub(1);
                app.p = change(self.p, to);
                self.p = to;
            }
            Rule::DeletePendantNt if self.nt.remove(&nbr) => app.nt_removed = vec![nbr],
            _ => {}
        }
        self.nt = self.nt.iter().filter_map(|&v| shaped.renaming.apply(v)).collect();
        self.graph = shaped.graph;
        app
    }

    pub fn try_contract(&mut self, rule: Rule) -> Option<RuleApplication> {
        let path = self.long_path()?;
        Some(self.contract(rule, &path))
    }

    pub fn try_twin_pendant(&mut self) -> Option<RuleApplication> {
        let (x, u) = self.twin_pendant()?;
        Some(self.delete(Rule::TwinPendant, x, u))
    }

    pub fn try_delete_pendant(&mut self, rule: Rule) -> Option<RuleApplication> {
        let (x, u) = self.first_pendant()?;
        Some(self.delete(rule, x, u))
    }

    /// Drops `p` and, for the leaf & internal problem, `q` when the pendant
    /// count already guarantees them.
    pub fn try_pendant_count(&mut self, rule: Rule) -> Option<RuleApplication> {
        let h = self.pendant_count();
        let mut app = RuleApplication::new(rule);
        if self.p > 0 && h >= self.p {
            app.p = change(self.p, 0);
            self.p = 0;
        }
        if rule == Rule::PendantCount && self.q > 0 && h >= self.q {
            app.q = change(self.q, 0);
            self.q = 0;
        }
        app.mutates().then_some(app)
    }

    pub fn bound(&self, rule: Rule) -> usize {
        let c = quarter_ceil(self.k);
        let (ell, nt) = (self.ell, self.nt.len());
        match rule {
            Rule::SimpleThreshold => 4 * c * ell * (ell + 6),
            Rule::AdvancedThreshold => (2 * (self.p.max(self.q) + 2 * c * ell) + self.q) * (ell + 6),
            Rule::SimpleThresholdNt => (4 * c * ell + 5 * nt) * (ell + 6),
            Rule::AdvancedThresholdNt => (4 * c * ell + 2 * self.p + 5 * nt) * (ell + 6),
            _ => unreachable!("{rule} has no size bound"),
        }
    }

    /// Threshold entry; `true` when the instance is below the bound.
    pub fn threshold(&self, rule: Rule) -> (bool, RuleApplication) {
        let bound = self.bound(rule);
        let mut app = RuleApplication::new(rule);
        app.threshold = Some(Threshold { n: self.n(), bound });
        (self.n() < bound, app)
    }
}
