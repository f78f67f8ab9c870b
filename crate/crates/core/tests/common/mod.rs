//! Helpers shared by the integration tests: instance generators and
//! oracles that do not go through the library's own enumeration.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spankern::graph::generate;
use spankern::kernel::{KernelResult, Outcome};
use spankern::oracle::{solve, Answer, Limits};
use spankern::{Constraints, Edge, Graph, Instance, InstanceNT, SpanningTree, Vertex, VertexSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Kruskal over a random edge order.
pub fn random_spanning_tree(g: &Graph, rng: &mut impl Rng) -> SpanningTree {
    let mut order: Vec<Edge> = g.edges().to_vec();
    order.shuffle(rng);
    let mut parent: Vec<usize> = (0..=g.n()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut chosen = Vec::new();
    for e in order {
        let (a, b) = (find(&mut parent, e.u()), find(&mut parent, e.v()));
        if a != b {
            parent[a] = b;
            chosen.push(e);
        }
    }
    SpanningTree::new(g, chosen).expect("connected host")
}

/// Number of spanning trees as the determinant of a reduced Laplacian,
/// computed with fraction-free Bareiss elimination.
pub fn kirchhoff_count(g: &Graph) -> i128 {
    let n = g.n();
    if n == 1 {
        return 1;
    }
    let size = n - 1;
    let mut a = vec![vec![0i128; size]; size];
    for e in g.edges() {
        let (u, v) = (e.u() - 1, e.v() - 1);
        for (x, y) in [(u, v), (v, u)] {
            if x < size {
                a[x][x] += 1;
                if y < size {
                    a[x][y] -= 1;
                }
            }
        }
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for i in 0..size {
        if a[i][i] == 0 {
            let Some(r) = (i + 1..size).find(|&r| a[r][i] != 0) else {
                return 0;
            };
            a.swap(i, r);
            sign = -sign;
        }
        for r in i + 1..size {
            for c in i + 1..size {
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) / prev;
            }
            a[r][i] = 0;
        }
        prev = a[i][i];
    }
    sign * a[size - 1][size - 1]
}

/// Exhaustive answer over all `(n-1)`-edge subsets and all `ell`-subsets of
/// feasible trees. Only for tiny graphs.
pub fn brute_force(g: &Graph, c: &Constraints) -> bool {
    let n = g.n();
    let m = g.m();
    let edges = g.edges();
    let mut trees: Vec<u32> = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize + 1 != n {
            continue;
        }
        let mut comp: Vec<usize> = (0..=n).collect();
        let mut deg = vec![0usize; n + 1];
        let mut ok = true;
        for (i, e) in edges.iter().enumerate() {
            if mask >> i & 1 == 0 {
                continue;
            }
            deg[e.u()] += 1;
            deg[e.v()] += 1;
            let (a, b) = (comp[e.u()], comp[e.v()]);
            if a == b {
                ok = false;
                break;
            }
            for x in comp.iter_mut() {
                if *x == b {
                    *x = a;
                }
            }
        }
        if !ok {
            continue;
        }
        let leaves = (1..=n).filter(|&v| deg[v] == 1).count();
        if leaves >= c.p && n - leaves >= c.q && c.nonterminals.iter().all(|&v| deg[v] != 1) {
            trees.push(mask);
        }
    }
    fn pick(trees: &[u32], chosen: &mut Vec<u32>, from: usize, ell: usize, k: u32) -> bool {
        if chosen.len() == ell {
            return true;
        }
        for i in from..trees.len() {
            if chosen.iter().all(|&t| (t ^ trees[i]).count_ones() >= k) {
                chosen.push(trees[i]);
                if pick(trees, chosen, i + 1, ell, k) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    pick(&trees, &mut Vec::new(), 0, c.ell, c.k as u32)
}

/// Tries every bijection; graphs up to about eight vertices.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    let mut da: Vec<usize> = a.vertices().map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = b.vertices().map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    fn extend(a: &Graph, b: &Graph, map: &mut Vec<Vertex>, used: &mut [bool]) -> bool {
        let v = map.len() + 1;
        if v > a.n() {
            return true;
        }
        for w in b.vertices() {
            if used[w] || a.degree(v) != b.degree(w) {
                continue;
            }
            let consistent = (1..v).all(|u| a.has_edge(u, v) == b.has_edge(map[u - 1], w));
            if consistent {
                used[w] = true;
                map.push(w);
                if extend(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    extend(a, b, &mut Vec::new(), &mut vec![false; b.n() + 1])
}

pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<Vertex> {
    let mut perm: Vec<Vertex> = (1..=n).collect();
    perm.shuffle(rng);
    perm
}

/// A small graph: usually connected with `n <= max_n`, `m <= max_m`,
/// sometimes a tree, occasionally disconnected.
pub fn small_graph(rng: &mut impl Rng, max_n: usize, max_m: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let cap = (n * (n - 1) / 2).min(max_m);
    if n >= 2 && rng.gen_bool(0.05) {
        let m = rng.gen_range(0..=cap.min(n - 2));
        let mut edges = Vec::new();
        while edges.len() < m {
            let (a, b) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            if a != b && !edges.contains(&(a.min(b), a.max(b))) {
                edges.push((a.min(b), a.max(b)));
            }
        }
        return Graph::new(n, edges).unwrap();
    }
    let m = if rng.gen_bool(0.1) { n - 1 } else { rng.gen_range(n - 1..=cap.max(n - 1)) };
    generate::random_connected(n, m, rng).unwrap()
}

pub fn random_subset(rng: &mut impl Rng, n: usize, max: usize) -> VertexSet {
    let size = rng.gen_range(0..=max.min(n));
    let mut all: Vec<Vertex> = (1..=n).collect();
    all.shuffle(rng);
    all[..size].iter().copied().collect()
}

pub fn random_li(rng: &mut impl Rng, max_n: usize, max_m: usize) -> Instance {
    let g = small_graph(rng, max_n, max_m);
    let n = g.n();
    let p = rng.gen_range(0..=4.min(n));
    let q = rng.gen_range(0..=4.min(n));
    Instance::new(g, p, q, rng.gen_range(1..=4), rng.gen_range(1..=3)).unwrap()
}

pub fn random_lnt(rng: &mut impl Rng, max_n: usize, max_m: usize) -> InstanceNT {
    let g = small_graph(rng, max_n, max_m);
    let n = g.n();
    let nt = random_subset(rng, n, 3);
    let p = rng.gen_range(0..=4.min(n));
    InstanceNT::new(g, nt, p, rng.gen_range(1..=4), rng.gen_range(1..=3)).unwrap()
}

/// Exact verdict; panics if the oracle's limits are hit.
pub fn verdict(g: &Graph, c: &Constraints) -> bool {
    match solve(g, c, &Limits::default()).answer {
        Answer::Yes => true,
        Answer::No => false,
        Answer::Inconclusive => panic!("oracle inconclusive on n = {}, m = {}", g.n(), g.m()),
    }
}

pub fn verdict_li(inst: &Instance) -> bool {
    verdict(inst.graph(), &inst.constraints())
}

pub fn verdict_lnt(inst: &InstanceNT) -> bool {
    verdict(inst.graph(), &inst.constraints())
}

/// Verdict implied by a kernelization outcome.
pub fn outcome_verdict<I>(outcome: &Outcome<I>, solve: impl Fn(&I) -> bool) -> bool {
    match outcome {
        Outcome::TrivialYes { .. } => true,
        Outcome::TrivialNo { .. } => false,
        Outcome::Reduced { instance }
        | Outcome::Delegated { instance }
        | Outcome::DelegationUnavailable { instance, .. } => solve(instance),
    }
}

pub fn result_verdict_li(r: &KernelResult<Instance>) -> bool {
    outcome_verdict(&r.outcome, verdict_li)
}

pub fn result_verdict_lnt(r: &KernelResult<InstanceNT>) -> bool {
    outcome_verdict(&r.outcome, verdict_lnt)
}

/// Attaches a path of `len` edges between `a` and `b` (new internal vertices).
pub fn with_handle(g: &Graph, a: Vertex, b: Vertex, len: usize) -> Graph {
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().iter().map(|e| (e.u(), e.v())).collect();
    let mut n = g.n();
    let mut prev = a;
    for _ in 1..len {
        n += 1;
        edges.push((prev, n));
        prev = n;
    }
    edges.push((prev, b));
    Graph::new(n, edges).unwrap()
}

/// Attaches one pendant to each listed vertex.
pub fn with_pendants(g: &Graph, hosts: &[Vertex]) -> Graph {
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().iter().map(|e| (e.u(), e.v())).collect();
    let mut n = g.n();
    for &h in hosts {
        n += 1;
        edges.push((h, n));
    }
    Graph::new(n, edges).unwrap()
}

/// Adds up to `count` random chords, keeping the graph simple.
pub fn with_chords(g: &Graph, count: usize, rng: &mut impl Rng) -> Graph {
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().iter().map(|e| (e.u(), e.v())).collect();
    let n = g.n();
    for _ in 0..count {
        let (a, b) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
        if a != b && !g.has_edge(a, b) && !edges.contains(&(a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    Graph::new(n, edges).unwrap()
}
