//! Exact solver for small instances.
//!
//! Enumerates spanning trees, keeps those meeting the per-tree constraints
//! and looks for `ell` of them at pairwise distance at least `k`. A greedy
//! pass during enumeration settles most yes-instances early; otherwise a
//! branch-and-bound clique search runs over the complete list.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, Graph};
use crate::instance::{Constraints, Instance, InstanceNT};
use crate::spantree::{for_each_spanning_tree, Enumeration, SpanningTree, DEFAULT_TREE_LIMIT};

/// Edge sets are bit masks over edge indices.
const MAX_EDGES: usize = 128;

/// Degree pruning needs all pairwise distances; skipped above this many trees.
const DEGREE_FILTER_MAX: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_trees: usize,
    pub max_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_trees: DEFAULT_TREE_LIMIT,
            max_nodes: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub trees: usize,
    pub feasible: usize,
    pub clique_nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<SpanningTree>>,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl OracleVerdict {
    fn inconclusive(stats: Stats, note: impl Into<String>) -> OracleVerdict {
        OracleVerdict {
            answer: Answer::Inconclusive,
            witness: None,
            stats,
            note: Some(note.into()),
        }
    }

    fn no(stats: Stats) -> OracleVerdict {
        OracleVerdict {
            answer: Answer::No,
            witness: None,
            stats,
            note: None,
        }
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    mask: u128,
    leaves: usize,
}

fn distance(a: u128, b: u128) -> usize {
    (a ^ b).count_ones() as usize
}

fn to_tree(g: &Graph, mask: u128) -> SpanningTree {
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e);
    SpanningTree::new(g, edges).expect("enumerated edge sets are spanning trees")
}

/// Decides whether `g` has `c.ell` spanning trees meeting `c` that are
/// pairwise at distance at least `c.k`.
pub fn solve(g: &Graph, c: &Constraints, limits: &Limits) -> OracleVerdict {
    let mut stats = Stats::default();
    if g.m() > MAX_EDGES {
        return OracleVerdict::inconclusive(stats, format!("more than {MAX_EDGES} edges"));
    }
    let n = g.n();
    let witness = |masks: &[u128]| Some(masks.iter().map(|&m| to_tree(g, m)).collect());
    let mut degree = vec![0u32; n + 1];
    let mut leaves_if_feasible = |idx: &[usize]| {
        degree.iter_mut().for_each(|d| *d = 0);
        let mut mask = 0u128;
        for &i in idx {
            let e: Edge = g.edges()[i];
            degree[e.u()] += 1;
            degree[e.v()] += 1;
            mask |= 1u128 << i;
        }
        let leaves = degree[1..].iter().filter(|&&d| d == 1).count();
        let ok = leaves >= c.p && n - leaves >= c.q && c.nonterminals.iter().all(|&v| degree[v] != 1);
        ok.then_some(Candidate { mask, leaves })
    };

    let mut probes: Vec<u128> = Vec::new();
    for idx in search_trees(g) {
        if let Some(t) = leaves_if_feasible(&idx) {
            if probes.iter().all(|&u| distance(u, t.mask) >= c.k) {
                probes.push(t.mask);
                if probes.len() == c.ell {
                    return OracleVerdict {
                        answer: Answer::Yes,
                        witness: witness(&probes),
                        stats,
                        note: None,
                    };
                }
            }
        }
    }

    let mut feasible: Vec<Candidate> = Vec::new();
    let mut greedy: Vec<u128> = Vec::new();
    let outcome = for_each_spanning_tree(g, limits.max_trees, |idx| {
        let Some(t) = leaves_if_feasible(idx) else {
            return ControlFlow::Continue(());
        };
        let mask = t.mask;
        feasible.push(t);
        if greedy.iter().all(|&t| distance(t, mask) >= c.k) {
            greedy.push(mask);
            if greedy.len() == c.ell {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    stats.trees = outcome.count();
    stats.feasible = feasible.len();
    match outcome {
        Enumeration::Stopped { .. } => {
            return OracleVerdict {
                answer: Answer::Yes,
                witness: witness(&greedy),
                stats,
                note: None,
            }
        }
        Enumeration::Overflow { count } => {
            return OracleVerdict::inconclusive(stats, format!("more than {count} spanning trees"));
        }
        Enumeration::Complete { .. } => {}
    }
    if feasible.len() < c.ell {
        return OracleVerdict::no(stats);
    }

    feasible.sort_by_key(|t| std::cmp::Reverse(t.leaves));
    let masks: Vec<u128> = feasible.iter().map(|t| t.mask).collect();
    let mut order: Vec<usize> = (0..masks.len()).collect();
    if masks.len() <= DEGREE_FILTER_MAX {
        let need = c.ell - 1;
        order.retain(|&i| masks.iter().filter(|&&m| distance(masks[i], m) >= c.k).count() >= need);
    }
    let mut search = CliqueSearch {
        masks: &masks,
        k: c.k,
        ell: c.ell,
        nodes: 0,
        max_nodes: limits.max_nodes,
        chosen: Vec::with_capacity(c.ell),
    };
    let found = search.extend(&order);
    stats.clique_nodes = search.nodes;
    match found {
        Search::Found => {
            let chosen: Vec<u128> = search.chosen.iter().map(|&i| masks[i]).collect();
            OracleVerdict {
                answer: Answer::Yes,
                witness: witness(&chosen),
                stats,
                note: None,
            }
        }
        Search::Exhausted => OracleVerdict::no(stats),
        Search::Budget => OracleVerdict::inconclusive(stats, format!("more than {} search nodes", limits.max_nodes)),
    }
}

/// Edge index lists of the search trees grown from every root, once with a
/// queue and once with a stack as the frontier.
fn search_trees(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    if n == 0 || g.m() + 1 < n {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(2 * n);
    for root in g.vertices() {
        for depth_first in [false, true] {
            let mut seen = vec![false; n + 1];
            let mut idx = Vec::with_capacity(n - 1);
            let mut frontier = std::collections::VecDeque::from([root]);
            seen[root] = true;
            while let Some(v) = if depth_first { frontier.pop_back() } else { frontier.pop_front() } {
                for &w in g.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        idx.push(g.edge_index(Edge::new(v, w)).expect("adjacent"));
                        frontier.push_back(w);
                    }
                }
            }
            if idx.len() + 1 == n {
                out.push(idx);
            }
        }
    }
    out
}

enum Search {
    Found,
    Exhausted,
    Budget,
}

struct CliqueSearch<'a> {
    masks: &'a [u128],
    k: usize,
    ell: usize,
    nodes: u64,
    max_nodes: u64,
    chosen: Vec<usize>,
}

impl CliqueSearch<'_> {
    fn extend(&mut self, cand: &[usize]) -> Search {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Search::Budget;
        }
        if self.chosen.len() == self.ell {
            return Search::Found;
        }
        for (pos, &v) in cand.iter().enumerate() {
            if self.chosen.len() + cand.len() - pos < self.ell {
                break;
            }
            let mv = self.masks[v];
            let next: Vec<usize> = cand[pos + 1..]
                .iter()
                .copied()
                .filter(|&u| distance(mv, self.masks[u]) >= self.k)
                .collect();
            self.chosen.push(v);
            match self.extend(&next) {
                Search::Exhausted => {
                    self.chosen.pop();
                }
                other => return other,
            }
        }
        Search::Exhausted
    }
}

pub fn solve_li(inst: &Instance, limits: &Limits) -> OracleVerdict {
    solve(inst.graph(), &inst.constraints(), limits)
}

pub fn solve_lnt(inst: &InstanceNT, limits: &Limits) -> OracleVerdict {
    solve(inst.graph(), &inst.constraints(), limits)
}

/// `Yes` if both instances have the same verdict, `No` if they differ,
/// `Inconclusive` if either could not be decided.
pub fn equivalent_li(a: &Instance, b: &Instance, limits: &Limits) -> Answer {
    compare(solve_li(a, limits).answer, solve_li(b, limits).answer)
}

pub fn equivalent_lnt(a: &InstanceNT, b: &InstanceNT, limits: &Limits) -> Answer {
    compare(solve_lnt(a, limits).answer, solve_lnt(b, limits).answer)
}

fn compare(a: Answer, b: Answer) -> Answer {
    match (a, b) {
        (Answer::Inconclusive, _) | (_, Answer::Inconclusive) => Answer::Inconclusive,
        (x, y) if x == y => Answer::Yes,
        _ => Answer::No,
    }
}

/// For `k <= 2` and no per-tree constraints any `ell` distinct spanning
/// trees qualify, so the answer is whether at least `ell` trees exist.
pub fn distinct_trees_suffice(g: &Graph, ell: usize) -> bool {
    let outcome = for_each_spanning_tree(g, ell, |_| ControlFlow::Continue(()));
    match outcome {
        Enumeration::Overflow { count } | Enumeration::Complete { count } | Enumeration::Stopped { count } => count >= ell,
    }
}
