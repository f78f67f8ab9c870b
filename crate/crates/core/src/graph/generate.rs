//! Deterministic graph families used by the test corpus and the `gen` command.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Edge, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

fn infeasible<T>(msg: impl Into<String>) -> Result<T, GenerateError> {
    Err(GenerateError::Infeasible(msg.into()))
}

/// Named families accepted by [`generate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum Family {
    RandomConnected { n: usize, m: usize },
    Cycle { n: usize },
    Path { n: usize },
    Complete { n: usize },
    Star { leaves: usize },
    Theta { a: usize, b: usize, c: usize },
    CubeLike { n: usize },
    Hypercube { dim: u32 },
}

/// Builds a member of `family`; `seed` only matters for random families.
pub fn generate(family: &Family, seed: u64) -> Result<Graph, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *family {
        Family::RandomConnected { n, m } => random_connected(n, m, &mut rng),
        Family::Cycle { n } => {
            if n < 3 {
                return infeasible("a cycle needs at least 3 vertices");
            }
            Ok(cycle(n))
        }
        Family::Path { n } => {
            if n == 0 {
                return infeasible("a path needs at least 1 vertex");
            }
            Ok(path(n))
        }
        Family::Complete { n } => {
            if n == 0 {
                return infeasible("a complete graph needs at least 1 vertex");
            }
            Ok(complete(n))
        }
        Family::Star { leaves } => Ok(star(leaves)),
        Family::Theta { a, b, c } => theta(a, b, c),
        Family::CubeLike { n } => cube_like(n),
        Family::Hypercube { dim } => Ok(hypercube(dim)),
    }
}

fn build(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Graph {
    Graph::new(n, edges).expect("generator produced an invalid graph")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    build(n, (1..=n).map(|i| (i, i % n + 1)))
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|i| (i, i + 1)))
}

pub fn complete(n: usize) -> Graph {
    build(n, (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))))
}

/// `K_{1,leaves}` with center 1.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (2..=leaves + 1).map(|i| (1, i)))
}

/// Vertices 1 and 2 joined by three internally disjoint paths of lengths
/// `a`, `b` and `c`; at most one of them may have length 1.
pub fn theta(a: usize, b: usize, c: usize) -> Result<Graph, GenerateError> {
    let lens = [a, b, c];
    if lens.contains(&0) || lens.iter().filter(|&&l| l == 1).count() > 1 {
        return infeasible("theta needs positive lengths with at most one equal to 1");
    }
    let mut edges = Vec::new();
    let mut next = 3;
    for len in lens {
        let mut prev = 1;
        for _ in 1..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 2));
    }
    Ok(build(next - 1, edges))
}

/// A connected graph of minimum degree 3: `K_4` for `n = 4`, otherwise the
/// prism `C_{n/2} x K_2` (even `n >= 6`). `cube_like(8)` is the 3-cube.
pub fn cube_like(n: usize) -> Result<Graph, GenerateError> {
    if n == 4 {
        return Ok(complete(4));
    }
    if n < 6 || n % 2 == 1 {
        return infeasible("cube-like graphs need n = 4 or an even n >= 6");
    }
    let h = n / 2;
    let mut edges = Vec::new();
    for i in 1..=h {
        let j = i % h + 1;
        edges.push((i, j));
        edges.push((h + i, h + j));
        edges.push((i, h + i));
    }
    Ok(build(n, edges))
}

/// The `dim`-dimensional hypercube on `2^dim` vertices.
pub fn hypercube(dim: u32) -> Graph {
    let n = 1usize << dim;
    let edges = (0..n).flat_map(|x| {
        (0..dim)
            .map(move |b| (x, x ^ (1 << b)))
            .filter(|&(x, y)| x < y)
            .map(|(x, y)| (x + 1, y + 1))
    });
    build(n, edges)
}

/// Replaces every edge by a path with `factor` edges.
pub fn subdivided(base: &Graph, factor: usize) -> Result<Graph, GenerateError> {
    if factor == 0 {
        return infeasible("subdivision factor must be at least 1");
    }
    let mut edges = Vec::new();
    let mut next = base.n() + 1;
    for e in base.edges() {
        let mut prev = e.u();
        for _ in 1..factor {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, e.v()));
    }
    Ok(build(next - 1, edges))
}

/// Attaches `count` pairs of twin pendants, each pair to a host vertex
/// chosen uniformly at random.
pub fn twin_pendant_gadget<R: Rng>(
    base: &Graph,
    count: usize,
    rng: &mut R,
) -> Result<Graph, GenerateError> {
    let mut edges: Vec<(Vertex, Vertex)> = base.edges().iter().map(|e| (e.u(), e.v())).collect();
    let mut next = base.n() + 1;
    for _ in 0..count {
        let host = rng.gen_range(1..=base.n());
        edges.push((host, next));
        edges.push((host, next + 1));
        next += 2;
    }
    Ok(build(next - 1, edges))
}

/// Attaches one pendant to each of `count` distinct random host vertices.
pub fn single_pendants<R: Rng>(
    base: &Graph,
    count: usize,
    rng: &mut R,
) -> Result<Graph, GenerateError> {
    if count > base.n() {
        return infeasible("more pendants than host vertices");
    }
    let mut hosts: Vec<Vertex> = base.vertices().collect();
    hosts.shuffle(rng);
    let mut edges: Vec<(Vertex, Vertex)> = base.edges().iter().map(|e| (e.u(), e.v())).collect();
    for (i, &h) in hosts[..count].iter().enumerate() {
        edges.push((h, base.n() + 1 + i));
    }
    Ok(build(base.n() + count, edges))
}

/// Uniform random labelled tree (random attachment order) plus `m - n + 1`
/// distinct extra edges.
pub fn random_connected<R: Rng>(n: usize, m: usize, rng: &mut R) -> Result<Graph, GenerateError> {
    if n == 0 {
        return infeasible("n must be positive");
    }
    if m + 1 < n {
        return infeasible(format!("m = {m} < n - 1 = {}", n - 1));
    }
    if m > n * (n - 1) / 2 {
        return infeasible(format!("m = {m} exceeds n(n-1)/2 for n = {n}"));
    }
    let mut order: Vec<Vertex> = (1..=n).collect();
    order.shuffle(rng);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.insert(Edge::new(order[i], parent));
    }
    if m - edges.len() > (n * (n - 1) / 2 - edges.len()) / 2 {
        // Dense target: sample the missing edges from the complement.
        let mut rest: Vec<Edge> = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| Edge::new(i, j)))
            .filter(|e| !edges.contains(e))
            .collect();
        rest.shuffle(rng);
        let need = m - edges.len();
        edges.extend(rest.into_iter().take(need));
    } else {
        while edges.len() < m {
            let a = rng.gen_range(1..=n);
            let b = rng.gen_range(1..=n);
            if a != b {
                edges.insert(Edge::new(a, b));
            }
        }
    }
    Ok(build(n, edges.into_iter().map(|e| (e.u(), e.v()))))
}

/// Random connected graph of minimum degree at least 2 on `n >= 3` vertices:
/// a random connected graph with `m` edges, then each degree-1 vertex gets
/// one more random neighbor.
pub fn random_min_degree2<R: Rng>(n: usize, m: usize, rng: &mut R) -> Result<Graph, GenerateError> {
    if n < 3 {
        return infeasible("minimum degree 2 needs at least 3 vertices");
    }
    let g = random_connected(n, m, rng)?;
    let mut edges: BTreeSet<Edge> = g.edges().iter().copied().collect();
    for v in g.vertices() {
        if g.degree(v) >= 2 {
            continue;
        }
        loop {
            let w = rng.gen_range(1..=n);
            if w != v && edges.insert(Edge::new(v, w)) {
                break;
            }
        }
    }
    Ok(build(n, edges.into_iter().map(|e| (e.u(), e.v()))))
}
