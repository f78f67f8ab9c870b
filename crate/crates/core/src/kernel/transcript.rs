//! Rule identifiers, transcript entries, replay and witness lifting.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, Renaming, Vertex};
use crate::instance::InstanceError;
use crate::spantree::{SpanningTree, TreeError};

use super::rules::Work;
use super::KernelInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// Contract an edge of a long degree-2-path; `q := max(0, q - 1)`.
    #[serde(rename = "R1")]
    ContractPath,
    /// Two pendants on one neighbor: delete one, `p := max(0, p - 1)`.
    #[serde(rename = "R2")]
    TwinPendant,
    /// At least `p` (resp. `q`) pendants: drop the constraint.
    #[serde(rename = "R3")]
    PendantCount,
    /// No constraints left: delete a pendant.
    #[serde(rename = "R4")]
    DeletePendant,
    #[serde(rename = "R5")]
    SimpleThreshold,
    #[serde(rename = "R6")]
    AdvancedThreshold,
    /// Like R1 with internal vertices outside the non-terminals; no parameter change.
    #[serde(rename = "R7")]
    ContractPathNt,
    #[serde(rename = "R8")]
    PendantCountNt,
    /// Delete a pendant and drop its neighbor from the non-terminals.
    #[serde(rename = "R9")]
    DeletePendantNt,
    #[serde(rename = "R10")]
    SimpleThresholdNt,
    #[serde(rename = "R11")]
    AdvancedThresholdNt,
    #[serde(rename = "disconnected")]
    Disconnected,
    #[serde(rename = "tree")]
    Tree,
    /// `p >= n` on a non-tree.
    #[serde(rename = "leaf-cap")]
    LeafCap,
    /// `q >= n` on a non-tree.
    #[serde(rename = "internal-cap")]
    InternalCap,
    /// A non-terminal of degree one.
    #[serde(rename = "nt-pendant")]
    NtPendant,
}

impl Rule {
    pub const LI: [Rule; 6] = [
        Rule::ContractPath,
        Rule::TwinPendant,
        Rule::PendantCount,
        Rule::DeletePendant,
        Rule::SimpleThreshold,
        Rule::AdvancedThreshold,
    ];

    pub const LNT: [Rule; 5] = [
        Rule::ContractPathNt,
        Rule::PendantCountNt,
        Rule::DeletePendantNt,
        Rule::SimpleThresholdNt,
        Rule::AdvancedThresholdNt,
    ];

    pub const CHECKS: [Rule; 5] = [
        Rule::Disconnected,
        Rule::Tree,
        Rule::LeafCap,
        Rule::InternalCap,
        Rule::NtPendant,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::ContractPath => "R1",
            Rule::TwinPendant => "R2",
            Rule::PendantCount => "R3",
            Rule::DeletePendant => "R4",
            Rule::SimpleThreshold => "R5",
            Rule::AdvancedThreshold => "R6",
            Rule::ContractPathNt => "R7",
            Rule::PendantCountNt => "R8",
            Rule::DeletePendantNt => "R9",
            Rule::SimpleThresholdNt => "R10",
            Rule::AdvancedThresholdNt => "R11",
            Rule::Disconnected => "disconnected",
            Rule::Tree => "tree",
            Rule::LeafCap => "leaf-cap",
            Rule::InternalCap => "internal-cap",
            Rule::NtPendant => "nt-pendant",
        }
    }

    /// Whether the rule belongs to the leaf & internal pipeline, the
    /// non-terminal one, or both (`None`).
    pub fn for_nonterminals(self) -> Option<bool> {
        match self {
            Rule::ContractPath
            | Rule::TwinPendant
            | Rule::PendantCount
            | Rule::DeletePendant
            | Rule::SimpleThreshold
            | Rule::AdvancedThreshold
            | Rule::InternalCap => Some(false),
            Rule::ContractPathNt
            | Rule::PendantCountNt
            | Rule::DeletePendantNt
            | Rule::SimpleThresholdNt
            | Rule::AdvancedThresholdNt
            | Rule::NtPendant => Some(true),
            Rule::Disconnected | Rule::Tree | Rule::LeafCap => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Change {
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub n: usize,
    pub bound: usize,
}

/// One transcript entry. Vertex ids refer to the graph before the step.
///
/// `touched` is `[v0, v1, v2, v3]` for a contraction of `v1 v2` on the path
/// `v0 v1 v2 v3 ...`, and `[x, neighbor]` for a pendant deletion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleApplication {
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub touched: Vec<Vertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Change>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Change>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nt_removed: Vec<Vertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub renaming: Option<Renaming>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Threshold>,
}

impl RuleApplication {
    pub(crate) fn new(rule: Rule) -> RuleApplication {
        RuleApplication {
            rule,
            touched: Vec::new(),
            p: None,
            q: None,
            nt_removed: Vec::new(),
            renaming: None,
            threshold: None,
        }
    }

    /// Whether the entry changed the instance.
    pub fn mutates(&self) -> bool {
        self.renaming.is_some() || self.p.is_some() || self.q.is_some() || !self.nt_removed.is_empty()
    }
}

/// One JSON object per line.
pub fn write_transcript(transcript: &[RuleApplication]) -> String {
    let mut out = String::new();
    for app in transcript {
        out.push_str(&serde_json::to_string(app).expect("transcript entries serialize"));
        out.push('\n');
    }
    out
}

pub fn read_transcript(text: &str) -> Result<Vec<RuleApplication>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("entry {index} ({rule}): {message}")]
    Mismatch { index: usize, rule: Rule, message: String },
    #[error("entry {index}: {source}")]
    Graph { index: usize, source: GraphError },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Re-applies every mutating entry of `transcript` to `input`, checking that
/// each recorded step is legal and reproduces the recorded renaming.
pub fn replay<I: KernelInstance>(input: &I, transcript: &[RuleApplication]) -> Result<I, ReplayError> {
    let mut w = input.to_work();
    for (index, app) in transcript.iter().enumerate() {
        replay_one(&mut w, app).map_err(|e| match e {
            StepError::Graph(source) => ReplayError::Graph { index, source },
            StepError::Mismatch(message) => ReplayError::Mismatch {
                index,
                rule: app.rule,
                message,
            },
        })?;
    }
    Ok(I::from_work(&w)?)
}

enum StepError {
    Graph(GraphError),
    Mismatch(String),
}

impl From<GraphError> for StepError {
    fn from(e: GraphError) -> Self {
        StepError::Graph(e)
    }
}

fn replay_one(w: &mut Work, app: &RuleApplication) -> Result<(), StepError> {
    let mismatch = |m: String| Err(StepError::Mismatch(m));
    for &v in &app.nt_removed {
        if !w.nt.remove(&v) {
            return mismatch(format!("{v} is not a non-terminal"));
        }
    }
    if let Some(recorded) = app.renaming {
        let shaped = match (recorded.merged_into, app.touched.as_slice()) {
            (Some(_), &[_, v1, v2, _]) => {
                if w.graph.degree(v1) != 2 || w.graph.degree(v2) != 2 {
                    return mismatch(format!("{v1} {v2} are not both of degree two"));
                }
                w.graph.contract_edge(v1, v2)?
            }
            (None, &[x, nbr]) => {
                if w.graph.neighbors(x) != [nbr] {
                    return mismatch(format!("{x} is not a pendant on {nbr}"));
                }
                w.graph.delete_vertex(x)?
            }
            _ => return mismatch("malformed location".into()),
        };
        if shaped.renaming != recorded {
            return mismatch("renaming differs".into());
        }
        w.graph = shaped.graph;
        w.nt = w.nt.iter().filter_map(|&v| recorded.apply(v)).collect();
    }
    for (change, slot, name) in [(app.p, &mut w.p, "p"), (app.q, &mut w.q, "q")] {
        if let Some(c) = change {
            if *slot != c.from {
                return mismatch(format!("{name} is {} not {}", *slot, c.from));
            }
            *slot = c.to;
        }
    }
    Ok(())
}

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("entry {index} ({rule}): tree edge {edge} cannot be lifted")]
    Unliftable { index: usize, rule: Rule, edge: Edge },
    #[error("entry {index} ({rule}): malformed location")]
    Malformed { index: usize, rule: Rule },
    #[error("lifted edge set is not a spanning tree: {0}")]
    Tree(#[from] TreeError),
}

/// Maps spanning trees of the graph at the end of `transcript` back to
/// spanning trees of `input`. Contractions are undone by re-inserting the
/// contracted edge; deletions by re-attaching the pendant. Pairwise
/// distances are preserved and each tree gains the leaves and internal
/// vertices the rules accounted for.
pub fn lift_family(
    transcript: &[RuleApplication],
    input: &Graph,
    trees: &[SpanningTree],
) -> Result<Vec<SpanningTree>, LiftError> {
    let mut sets: Vec<Vec<(Vertex, Vertex)>> = trees
        .iter()
        .map(|t| t.edges().iter().map(|e| (e.u(), e.v())).collect())
        .collect();
    for (index, app) in transcript.iter().enumerate().rev() {
        let Some(r) = app.renaming else { continue };
        for set in &mut sets {
            *set = lift_edges(index, app, &r, set)?;
        }
    }
    sets.into_iter()
        .map(|set| Ok(SpanningTree::new(input, set.into_iter().map(|(a, b)| Edge::new(a, b)))?))
        .collect()
}

fn lift_edges(
    index: usize,
    app: &RuleApplication,
    r: &Renaming,
    edges: &[(Vertex, Vertex)],
) -> Result<Vec<(Vertex, Vertex)>, LiftError> {
    let malformed = || LiftError::Malformed { index, rule: app.rule };
    let back = |y: Vertex| r.preimage(y)[0];
    let mut out = Vec::with_capacity(edges.len() + 1);
    match (r.merged_into, app.touched.as_slice()) {
        (Some(keep), &[v0, v1, v2, v3]) => {
            let m = r.apply(keep).ok_or_else(malformed)?;
            out.push((v1, v2));
            for &(a, b) in edges {
                let other = if a == m {
                    b
                } else if b == m {
                    a
                } else {
                    out.push((back(a), back(b)));
                    continue;
                };
                match back(other) {
                    x if x == v0 => out.push((v0, v1)),
                    x if x == v3 => out.push((v2, v3)),
                    _ => {
                        return Err(LiftError::Unliftable {
                            index,
                            rule: app.rule,
                            edge: Edge::new(a, b),
                        })
                    }
                }
            }
        }
        (None, &[x, nbr]) => {
            out.extend(edges.iter().map(|&(a, b)| (back(a), back(b))));
            out.push((x, nbr));
        }
        _ => return Err(malformed()),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_ids_round_trip() {
        for rule in Rule::LI.into_iter().chain(Rule::LNT).chain(Rule::CHECKS) {
            let json = serde_json::to_string(&rule).unwrap();
            assert_eq!(json, format!("\"{}\"", rule.id()));
            assert_eq!(serde_json::from_str::<Rule>(&json).unwrap(), rule);
        }
    }

    #[test]
    fn ndjson_round_trip() {
        let mut a = RuleApplication::new(Rule::ContractPath);
        a.touched = vec![1, 2, 3, 4];
        a.q = Some(Change { from: 1, to: 0 });
        a.renaming = Some(Renaming {
            removed: 3,
            merged_into: Some(2),
        });
        let mut b = RuleApplication::new(Rule::SimpleThreshold);
        b.threshold = Some(Threshold { n: 8, bound: 64 });
        let text = write_transcript(&[a.clone(), b.clone()]);
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("{\"rule\":\"R1\""));
        assert_eq!(read_transcript(&text).unwrap(), vec![a.clone(), b.clone()]);
        assert!(a.mutates());
        assert!(!b.mutates());
    }
}
