//! Reading graphs, vertex lists and families; writing output.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

use spankern::graph::io::{parse_vertex_list, read_graph, read_graphs};
use spankern::{Edge, Graph, Instance, InstanceNT, VertexSet};

use crate::{Failure, InstanceArgs, Problem};

pub enum Loaded {
    Li(Instance),
    Lnt(InstanceNT),
}

impl Loaded {
    pub fn graph(&self) -> &Graph {
        match self {
            Loaded::Li(i) => i.graph(),
            Loaded::Lnt(i) => i.graph(),
        }
    }

    pub fn constraints(&self) -> spankern::Constraints {
        match self {
            Loaded::Li(i) => i.constraints(),
            Loaded::Lnt(i) => i.constraints(),
        }
    }
}

pub fn read_text(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        None => read_stdin(),
        Some(p) if p.as_os_str() == "-" => read_stdin(),
        Some(p) => fs::read_to_string(p)
            .with_context(|| format!("reading {}", p.display()))
            .map_err(Failure::data),
    }
}

fn read_stdin() -> Result<String, Failure> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .context("reading stdin")
        .map_err(Failure::data)?;
    Ok(s)
}

pub fn load_graph(path: Option<&Path>) -> Result<Graph, Failure> {
    let text = read_text(path)?;
    read_graph(&text)
        .with_context(|| format!("parsing graph from {}", describe(path)))
        .map_err(Failure::data)
}

fn describe(path: Option<&Path>) -> String {
    path.map_or("stdin".to_string(), |p| p.display().to_string())
}

pub fn load_nonterminals(nt: Option<&str>, nt_file: Option<&PathBuf>, n: usize) -> Result<VertexSet, Failure> {
    let text = match (nt, nt_file) {
        (Some(s), _) => s.to_string(),
        (None, Some(p)) => read_text(Some(p))?,
        (None, None) => return Ok(VertexSet::new()),
    };
    parse_vertex_list(&text, n).context("parsing non-terminals").map_err(Failure::data)
}

pub fn load_instance(a: &InstanceArgs) -> Result<Loaded, Failure> {
    match a.problem {
        Problem::Li if a.nt.is_some() || a.nt_file.is_some() => {
            return Err(Failure::usage("--nt and --nt-file apply to --problem lnt only"))
        }
        Problem::Lnt if a.q.is_some() => return Err(Failure::usage("-q applies to --problem li only")),
        _ => {}
    }
    let g = load_graph(a.input.as_deref())?;
    let loaded = match a.problem {
        Problem::Li => Instance::new(g, a.p, a.q.unwrap_or(0), a.k, a.ell).map(Loaded::Li),
        Problem::Lnt => {
            let nt = load_nonterminals(a.nt.as_deref(), a.nt_file.as_ref(), g.n())?;
            InstanceNT::new(g, nt, a.p, a.k, a.ell).map(Loaded::Lnt)
        }
    };
    loaded.context("invalid instance").map_err(Failure::data)
}

/// Tree edge sets from edge-list blocks or from the JSON output of
/// `kernelize`, `solve` or `construct`.
pub fn load_family(path: &Path) -> Result<Vec<Vec<Edge>>, Failure> {
    let text = read_text(Some(path))?;
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", path.display()))
            .map_err(Failure::data)?;
        return family_from_json(&v).map_err(Failure::data);
    }
    let graphs = read_graphs(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::data)?;
    Ok(graphs.into_iter().map(|g| g.edges().to_vec()).collect())
}

fn family_from_json(v: &Value) -> anyhow::Result<Vec<Vec<Edge>>> {
    let trees = match v.get("witness").or_else(|| v.get("family")) {
        Some(Value::Array(trees)) => trees,
        Some(w @ Value::Object(_)) => w
            .get("trees")
            .and_then(Value::as_array)
            .context("witness object without a `trees` array")?,
        _ => anyhow::bail!("no witness or family in the JSON document"),
    };
    trees
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let edges = t.get("edges").cloned().with_context(|| format!("tree {i} has no edges"))?;
            serde_json::from_value(edges).with_context(|| format!("tree {i}: malformed edges"))
        })
        .collect()
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::data),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .context("writing stdout")
                .map_err(Failure::data)
        }
    }
}

pub fn write_json(path: Option<&Path>, value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(Failure::internal)?;
    text.push('\n');
    write_output(path, &text)
}
