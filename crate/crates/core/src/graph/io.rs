//! Edge-list text format.
//!
//! ```text
//! # comment lines start with '#'
//! n m
//! u v      (m lines, 1-based ids)
//! ```
//!
//! Spanning trees use the same format with header `n n-1`; a family file is
//! a concatenation of such blocks.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Edge, Graph, GraphError, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected `n m`")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed edge, expected `u v`")]
    MalformedEdge { line: usize },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("empty input")]
    Empty,
    #[error("malformed vertex id `{0}`")]
    MalformedVertex(String),
    #[error("non-terminal {vertex} out of range 1..={n}")]
    NonterminalOutOfRange { vertex: Vertex, n: usize },
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// Reads every block in `text`; each block is a header followed by its edges.
pub fn read_graphs(text: &str) -> Result<Vec<Graph>, ParseError> {
    let mut lines = content_lines(text).peekable();
    let mut graphs = Vec::new();
    while let Some((hline, header)) = lines.next() {
        let (n, m) = parse_pair(header).ok_or(ParseError::MalformedHeader { line: hline })?;
        if n == 0 {
            return Err(ParseError::Graph {
                line: hline,
                source: GraphError::Empty,
            });
        }
        let mut edges = Vec::with_capacity(m);
        let mut seen = std::collections::HashSet::with_capacity(m);
        for found in 0..m {
            let (line, body) = lines.next().ok_or(ParseError::EdgeCount { expected: m, found })?;
            let (u, v) = parse_pair(body).ok_or(ParseError::MalformedEdge { line })?;
            let err = |source| ParseError::Graph { line, source };
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(err(GraphError::VertexOutOfRange { vertex: x, n }));
                }
            }
            if u == v {
                return Err(err(GraphError::SelfLoop(u)));
            }
            if !seen.insert(Edge::new(u, v)) {
                return Err(err(GraphError::DuplicateEdge(Edge::new(u, v))));
            }
            edges.push((u, v));
        }
        graphs.push(Graph::new(n, edges).map_err(|source| ParseError::Graph { line: hline, source })?);
    }
    Ok(graphs)
}

/// Reads exactly one graph; trailing edge lines beyond `m` are an error.
pub fn read_graph(text: &str) -> Result<Graph, ParseError> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let Some(&(hline, header)) = lines.first() else {
        return Err(ParseError::Empty);
    };
    let (_, m) = parse_pair(header).ok_or(ParseError::MalformedHeader { line: hline })?;
    if lines.len() - 1 > m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: lines.len() - 1,
        });
    }
    Ok(read_graphs(text)?.remove(0))
}

/// Serializes in normalized form: sorted edges, smaller endpoint first.
pub fn write_graph(g: &Graph) -> String {
    write_edges(g.n(), g.edges())
}

pub fn write_edges(n: usize, edges: &[Edge]) -> String {
    let mut out = String::with_capacity(8 * (edges.len() + 1));
    writeln!(out, "{} {}", n, edges.len()).unwrap();
    for e in edges {
        writeln!(out, "{} {}", e.u(), e.v()).unwrap();
    }
    out
}

/// Parses vertex ids separated by commas and/or whitespace, checking they lie in `1..=n`.
pub fn parse_vertex_list(text: &str, n: usize) -> Result<VertexSet, ParseError> {
    let mut set = VertexSet::new();
    for tok in text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
    {
        let v: Vertex = tok
            .parse()
            .map_err(|_| ParseError::MalformedVertex(tok.to_string()))?;
        if v == 0 || v > n {
            return Err(ParseError::NonterminalOutOfRange { vertex: v, n });
        }
        set.insert(v);
    }
    Ok(set)
}
