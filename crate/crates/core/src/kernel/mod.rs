//! The two kernelization pipelines.
//!
//! Both pipelines run their graph rules to a global fixpoint, reset
//! constraints that the pendant vertices already guarantee, and finish with
//! a size threshold: below it the instance is returned, above it the answer
//! is either known (no constraints left, leaf & internal problem) or
//! equivalent to a single-tree question handed to a [`KernelBlackBox`].

mod rules;
mod transcript;

use serde::Serialize;
use thiserror::Error;

use crate::blackbox::{ExactDecider, KernelBlackBox, MistInstance, NtstInstance};
use crate::diversify::{construct_family, verify_trees};
use crate::graph::VertexSet;
use crate::instance::{Constraints, Instance, InstanceError, InstanceNT};
use crate::spantree::{arbitrary_spanning_tree, SpanningTree};

pub(crate) use rules::Work;
pub use transcript::{
    lift_family, read_transcript, write_transcript, Change, LiftError, ReplayError, Rule, RuleApplication,
    Threshold,
};

/// Conversion between the public instance types and the shared working form.
pub trait KernelInstance: Clone + Sized + private::Sealed {
    #[doc(hidden)]
    fn to_work(&self) -> Work;
    #[doc(hidden)]
    fn from_work(w: &Work) -> Result<Self, InstanceError>;
    #[doc(hidden)]
    const NONTERMINALS: bool;
}

mod private {
    pub trait Sealed {}
    impl Sealed for crate::Instance {}
    impl Sealed for crate::InstanceNT {}
}

impl KernelInstance for Instance {
    fn to_work(&self) -> Work {
        Work {
            graph: self.graph().clone(),
            p: self.p(),
            q: self.q(),
            k: self.k(),
            ell: self.ell(),
            nt: VertexSet::new(),
        }
    }

    fn from_work(w: &Work) -> Result<Self, InstanceError> {
        Instance::new(w.graph.clone(), w.p, w.q, w.k, w.ell)
    }

    const NONTERMINALS: bool = false;
}

impl KernelInstance for InstanceNT {
    fn to_work(&self) -> Work {
        Work {
            graph: self.graph().clone(),
            p: self.p(),
            q: 0,
            k: self.k(),
            ell: self.ell(),
            nt: self.nonterminals().clone(),
        }
    }

    fn from_work(w: &Work) -> Result<Self, InstanceError> {
        InstanceNT::new(w.graph.clone(), w.nt.clone(), w.p, w.k, w.ell)
    }

    const NONTERMINALS: bool = true;
}

#[derive(Clone, Copy)]
pub struct KernelOptions<'a> {
    /// Construct a witness family when the answer is a known yes.
    pub witness: bool,
    pub blackbox: &'a dyn KernelBlackBox,
}

impl Default for KernelOptions<'static> {
    fn default() -> Self {
        KernelOptions {
            witness: false,
            blackbox: &ExactDecider::DEFAULT,
        }
    }
}

/// A yes-certificate: `trees` span the input graph, `kernel_trees` the
/// graph the pipeline stopped at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub trees: Vec<SpanningTree>,
    pub kernel_trees: Vec<SpanningTree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum Outcome<I> {
    /// Equivalent instance within the size bound of the final rule.
    Reduced { instance: I },
    TrivialYes {
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Witness>,
    },
    TrivialNo { rule: Rule, reason: String },
    /// Equivalent instance built from the black-box kernel's output.
    Delegated { instance: I },
    /// The black box declined; `instance` is the equivalent instance it
    /// would have been given, with no size guarantee.
    DelegationUnavailable { instance: I, reason: String },
}

impl<I> Outcome<I> {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Reduced { .. } => "Reduced",
            Outcome::TrivialYes { .. } => "TrivialYes",
            Outcome::TrivialNo { .. } => "TrivialNo",
            Outcome::Delegated { .. } => "Delegated",
            Outcome::DelegationUnavailable { .. } => "DelegationUnavailable",
        }
    }

    /// The output instance, if the outcome carries one.
    pub fn instance(&self) -> Option<&I> {
        match self {
            Outcome::Reduced { instance }
            | Outcome::Delegated { instance }
            | Outcome::DelegationUnavailable { instance, .. } => Some(instance),
            _ => None,
        }
    }

    /// `Some(answer)` for trivial outcomes.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Outcome::TrivialYes { .. } => Some(true),
            Outcome::TrivialNo { .. } => Some(false),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelResult<I> {
    #[serde(flatten)]
    pub outcome: Outcome<I>,
    pub transcript: Vec<RuleApplication>,
}

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("{rule} does not apply: {reason}")]
    Guard { rule: Rule, reason: &'static str },
    #[error("{rule} belongs to the other problem")]
    WrongProblem { rule: Rule },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn internal(msg: impl std::fmt::Display) -> KernelError {
    KernelError::Internal(msg.to_string())
}

/// Result of a single standalone rule application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step<I> {
    Continue { instance: I, application: RuleApplication },
    Stop { outcome: Outcome<I>, application: RuleApplication },
}

impl<I> Step<I> {
    pub fn application(&self) -> &RuleApplication {
        match self {
            Step::Continue { application, .. } | Step::Stop { application, .. } => application,
        }
    }
}

enum Halt {
    Reduced,
    /// Trees span the current graph.
    Yes(Option<Vec<SpanningTree>>),
    No(Rule, String),
    Delegated(Work),
    Unavailable(String),
}

struct Driver<'a> {
    w: Work,
    transcript: Vec<RuleApplication>,
    opts: KernelOptions<'a>,
}

impl Driver<'_> {
    fn push(&mut self, app: RuleApplication) -> Result<(), KernelError> {
        if app.renaming.is_some() && !self.w.graph.is_connected() {
            return Err(internal(format!("{} disconnected the graph", app.rule)));
        }
        self.transcript.push(app);
        Ok(())
    }

    /// Applies the first applicable rule of `rules`; `false` at a fixpoint.
    fn step(&mut self, rules: &[Rule]) -> Result<bool, KernelError> {
        for &rule in rules {
            let app = match rule {
                Rule::ContractPath | Rule::ContractPathNt => self.w.try_contract(rule),
                Rule::TwinPendant => self.w.try_twin_pendant(),
                Rule::DeletePendant | Rule::DeletePendantNt => self.w.try_delete_pendant(rule),
                _ => unreachable!("{rule} is not a graph rule"),
            };
            if let Some(app) = app {
                self.push(app)?;
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn stop(rule: Rule, halt: Halt) -> (Halt, RuleApplication) {
    (halt, RuleApplication::new(rule))
}

/// Disconnected, tree, non-terminal pendant and capacity checks.
fn prechecks(w: &Work, nonterminals: bool) -> Option<(Halt, RuleApplication)> {
    if !w.graph.is_connected() {
        return Some(stop(Rule::Disconnected, Halt::No(Rule::Disconnected, "graph is disconnected".into())));
    }
    if w.graph.is_tree() {
        return Some(solve_tree(w));
    }
    if nonterminals && w.has_nt_pendant() {
        let reason = "a non-terminal has degree one".to_string();
        return Some(stop(Rule::NtPendant, Halt::No(Rule::NtPendant, reason)));
    }
    caps(w, nonterminals)
}

/// On a connected non-tree a spanning tree has at most `n - 1` leaves and
/// at most `n - 2` internal vertices.
fn caps(w: &Work, nonterminals: bool) -> Option<(Halt, RuleApplication)> {
    if w.p >= w.n() {
        let reason = format!("p = {} but at most {} leaves are possible", w.p, w.n() - 1);
        return Some(stop(Rule::LeafCap, Halt::No(Rule::LeafCap, reason)));
    }
    if !nonterminals && w.q >= w.n() {
        let reason = format!("q = {} but at most {} internal vertices are possible", w.q, w.n() - 2);
        return Some(stop(Rule::InternalCap, Halt::No(Rule::InternalCap, reason)));
    }
    None
}

fn solve_tree(w: &Work) -> (Halt, RuleApplication) {
    let t = arbitrary_spanning_tree(&w.graph).expect("a tree is its own spanning tree");
    let reason = if w.ell > 1 {
        Some(format!("a tree has one spanning tree, {} requested", w.ell))
    } else if t.leaf_count() < w.p {
        Some(format!("the tree has {} leaves, {} required", t.leaf_count(), w.p))
    } else if t.internal_count() < w.q {
        Some(format!("the tree has {} internal vertices, {} required", t.internal_count(), w.q))
    } else if w.nt.iter().any(|&v| t.is_leaf(v)) {
        Some("a non-terminal is a leaf of the tree".to_string())
    } else {
        None
    };
    match reason {
        Some(r) => stop(Rule::Tree, Halt::No(Rule::Tree, r)),
        None => stop(Rule::Tree, Halt::Yes(Some(vec![t]))),
    }
}

/// Builds `ell` pairwise `k`-diverse trees on a graph with no constraints
/// left, minimum degree two and no long degree-2-path.
fn construct_witness(w: &Work) -> Result<Vec<SpanningTree>, KernelError> {
    construct_family(&w.graph, &VertexSet::new(), w.k, w.ell, None)
        .map(|c| c.family)
        .map_err(|e| internal(format!("witness construction failed above the threshold: {e}")))
}

fn delegate(w: &Work, nonterminals: bool, bb: &dyn KernelBlackBox) -> Halt {
    let out = if nonterminals {
        let inst = NtstInstance::new(w.graph.clone(), w.nt.clone()).expect("non-terminals are in range");
        bb.ntst_kernel(&inst).map(|o| Work {
            graph: o.graph().clone(),
            p: 0,
            q: 0,
            k: 1,
            ell: 1,
            nt: o.nonterminals().clone(),
        })
    } else {
        let inst = MistInstance {
            graph: w.graph.clone(),
            q: w.q,
        };
        bb.mist_kernel(&inst).map(|o| Work {
            graph: o.graph,
            p: 0,
            q: o.q,
            k: 1,
            ell: 1,
            nt: VertexSet::new(),
        })
    };
    match out {
        Ok(w) => Halt::Delegated(w),
        Err(e) => Halt::Unavailable(e.reason),
    }
}

/// Final threshold: below the bound keep the instance, above it finish
/// with `above`.
fn finish(d: &mut Driver, rule: Rule, above: impl FnOnce(&Work) -> Result<Halt, KernelError>) -> Result<Halt, KernelError> {
    let (small, app) = d.w.threshold(rule);
    d.push(app)?;
    if small {
        Ok(Halt::Reduced)
    } else {
        above(&d.w)
    }
}

fn run_li(d: &mut Driver) -> Result<Halt, KernelError> {
    if let Some((halt, app)) = prechecks(&d.w, false) {
        d.push(app)?;
        return Ok(halt);
    }
    loop {
        if let Some((halt, app)) = caps(&d.w, false) {
            d.push(app)?;
            return Ok(halt);
        }
        if !d.step(&[Rule::ContractPath, Rule::TwinPendant])? {
            break;
        }
    }
    if let Some(app) = d.w.try_pendant_count(Rule::PendantCount) {
        d.push(app)?;
    }
    if d.w.p == 0 && d.w.q == 0 {
        while d.step(&[Rule::ContractPath, Rule::TwinPendant, Rule::DeletePendant])? {}
        let witness = d.opts.witness;
        finish(d, Rule::SimpleThreshold, |w| {
            Ok(Halt::Yes(if witness { Some(construct_witness(w)?) } else { None }))
        })
    } else {
        let bb = d.opts.blackbox;
        finish(d, Rule::AdvancedThreshold, |w| Ok(delegate(w, false, bb)))
    }
}

fn run_lnt(d: &mut Driver) -> Result<Halt, KernelError> {
    if let Some((halt, app)) = prechecks(&d.w, true) {
        d.push(app)?;
        return Ok(halt);
    }
    loop {
        if let Some((halt, app)) = caps(&d.w, true) {
            d.push(app)?;
            return Ok(halt);
        }
        if !d.step(&[Rule::ContractPathNt])? {
            break;
        }
    }
    if let Some(app) = d.w.try_pendant_count(Rule::PendantCountNt) {
        d.push(app)?;
    }
    let bb = d.opts.blackbox;
    if d.w.p == 0 {
        while d.step(&[Rule::ContractPathNt, Rule::DeletePendantNt])? {}
        if d.w.has_nt_pendant() {
            return Err(internal("pendant deletion exposed a non-terminal"));
        }
        finish(d, Rule::SimpleThresholdNt, |w| Ok(delegate(w, true, bb)))
    } else {
        finish(d, Rule::AdvancedThresholdNt, |w| Ok(delegate(w, true, bb)))
    }
}

fn conclude<I: KernelInstance>(
    input: &I,
    d: Driver,
    halt: Halt,
) -> Result<KernelResult<I>, KernelError> {
    let wrap = |w: &Work| I::from_work(w).map_err(internal);
    let outcome = match halt {
        Halt::Reduced => Outcome::Reduced { instance: wrap(&d.w)? },
        Halt::Delegated(out) => Outcome::Delegated { instance: wrap(&out)? },
        Halt::Unavailable(reason) => Outcome::DelegationUnavailable {
            instance: wrap(&d.w)?,
            reason,
        },
        Halt::No(rule, reason) => Outcome::TrivialNo { rule, reason },
        Halt::Yes(trees) => {
            let witness = match trees {
                Some(kernel_trees) if d.opts.witness => {
                    let start = input.to_work();
                    let trees = lift_family(&d.transcript, &start.graph, &kernel_trees).map_err(internal)?;
                    let c = Constraints {
                        p: start.p,
                        q: start.q,
                        k: start.k,
                        ell: start.ell,
                        nonterminals: start.nt.clone(),
                    };
                    if !verify_trees(&start.graph, &trees, &c).passed {
                        return Err(internal("lifted witness fails verification"));
                    }
                    Some(Witness { trees, kernel_trees })
                }
                _ => None,
            };
            Outcome::TrivialYes { witness }
        }
    };
    Ok(KernelResult {
        outcome,
        transcript: d.transcript,
    })
}

fn kernelize<I: KernelInstance>(input: &I, opts: &KernelOptions) -> Result<KernelResult<I>, KernelError> {
    let mut d = Driver {
        w: input.to_work(),
        transcript: Vec::new(),
        opts: *opts,
    };
    let halt = if I::NONTERMINALS { run_lnt(&mut d)? } else { run_li(&mut d)? };
    conclude(input, d, halt)
}

/// Kernelizes a leaf & internal instance.
pub fn kernelize_li(inst: &Instance, opts: &KernelOptions) -> Result<KernelResult<Instance>, KernelError> {
    kernelize(inst, opts)
}

/// Kernelizes a leaf & non-terminal instance.
pub fn kernelize_lnt(inst: &InstanceNT, opts: &KernelOptions) -> Result<KernelResult<InstanceNT>, KernelError> {
    kernelize(inst, opts)
}

fn guard(ok: bool, rule: Rule, reason: &'static str) -> Result<(), KernelError> {
    if ok {
        Ok(())
    } else {
        Err(KernelError::Guard { rule, reason })
    }
}

/// Performs exactly one application of `rule`, provided its guard holds.
/// Threshold rules and checks end in [`Step::Stop`].
pub fn apply_rule<I: KernelInstance>(inst: &I, rule: Rule, opts: &KernelOptions) -> Result<Step<I>, KernelError> {
    let nonterminals = I::NONTERMINALS;
    if rule.for_nonterminals() == Some(!nonterminals) {
        return Err(KernelError::WrongProblem { rule });
    }
    let mut d = Driver {
        w: inst.to_work(),
        transcript: Vec::new(),
        opts: *opts,
    };
    let w = &d.w;
    let cyclic = w.is_cyclic();
    let h = w.pendant_count();
    let none = |app: Option<RuleApplication>, reason| app.ok_or(KernelError::Guard { rule, reason });
    let halt = match rule {
        Rule::Disconnected => {
            guard(!w.graph.is_connected(), rule, "the graph is connected")?;
            Some(prechecks(w, nonterminals).unwrap())
        }
        Rule::Tree => {
            guard(w.graph.is_connected() && w.graph.is_tree(), rule, "not a tree")?;
            Some(solve_tree(w))
        }
        Rule::NtPendant => {
            guard(w.graph.is_connected() && w.has_nt_pendant(), rule, "no non-terminal of degree one")?;
            let reason = "a non-terminal has degree one".to_string();
            Some(stop(rule, Halt::No(rule, reason)))
        }
        Rule::LeafCap => {
            guard(cyclic && w.p >= w.n(), rule, "needs a connected non-tree with p >= n")?;
            caps(w, nonterminals)
        }
        Rule::InternalCap => {
            guard(cyclic && w.p < w.n() && w.q >= w.n(), rule, "needs a connected non-tree with q >= n > p")?;
            caps(w, nonterminals)
        }
        _ => None,
    };
    if let Some((halt, app)) = halt {
        d.push(app)?;
        return finish_step(inst, d, halt);
    }

    guard(cyclic, rule, "the graph must be connected and not a tree")?;
    let r3_applies = (w.p > 0 && h >= w.p) || (!nonterminals && w.q > 0 && h >= w.q);
    let long = w.long_path().is_some();
    let twins = !nonterminals && w.twin_pendant().is_some();
    match rule {
        Rule::ContractPath | Rule::ContractPathNt => {
            let app = none(d.w.try_contract(rule), "no long degree-2-path")?;
            d.push(app)?;
        }
        Rule::TwinPendant => {
            let app = none(d.w.try_twin_pendant(), "no two pendants share a neighbor")?;
            d.push(app)?;
        }
        Rule::PendantCount | Rule::PendantCountNt => {
            guard(!twins, rule, "twin pendants remain")?;
            guard(!d.w.has_nt_pendant(), rule, "a non-terminal has degree one")?;
            let app = none(d.w.try_pendant_count(rule), "no constraint is guaranteed by the pendants")?;
            d.push(app)?;
        }
        Rule::DeletePendant | Rule::DeletePendantNt => {
            guard(w.p == 0 && w.q == 0, rule, "constraints remain")?;
            guard(!d.w.has_nt_pendant(), rule, "a non-terminal has degree one")?;
            let app = none(d.w.try_delete_pendant(rule), "no pendant vertex")?;
            d.push(app)?;
        }
        Rule::SimpleThreshold | Rule::SimpleThresholdNt => {
            guard(w.p == 0 && w.q == 0, rule, "constraints remain")?;
            guard(h == 0, rule, "pendant vertices remain")?;
            guard(!long, rule, "a long degree-2-path remains")?;
            let witness = d.opts.witness;
            let bb = d.opts.blackbox;
            let halt = finish(&mut d, rule, |w| {
                if nonterminals {
                    Ok(delegate(w, true, bb))
                } else {
                    Ok(Halt::Yes(if witness { Some(construct_witness(w)?) } else { None }))
                }
            })?;
            return finish_step(inst, d, halt);
        }
        Rule::AdvancedThreshold | Rule::AdvancedThresholdNt => {
            guard(w.p.max(w.q) > 0, rule, "no constraint remains")?;
            guard(!long && !twins && !r3_applies, rule, "an earlier rule applies")?;
            guard(!d.w.has_nt_pendant(), rule, "a non-terminal has degree one")?;
            let bb = d.opts.blackbox;
            let halt = finish(&mut d, rule, |w| Ok(delegate(w, nonterminals, bb)))?;
            return finish_step(inst, d, halt);
        }
        _ => unreachable!(),
    }
    let application = d.transcript.pop().expect("one application recorded");
    Ok(Step::Continue {
        instance: I::from_work(&d.w).map_err(internal)?,
        application,
    })
}

fn finish_step<I: KernelInstance>(inst: &I, d: Driver, halt: Halt) -> Result<Step<I>, KernelError> {
    let mut result = conclude(inst, d, halt)?;
    let application = result.transcript.pop().expect("one application recorded");
    Ok(Step::Stop {
        outcome: result.outcome,
        application,
    })
}

/// Replays a leaf & internal transcript from its input instance.
pub fn replay_li(input: &Instance, transcript: &[RuleApplication]) -> Result<Instance, ReplayError> {
    transcript::replay(input, transcript)
}

/// Replays a leaf & non-terminal transcript from its input instance.
pub fn replay_lnt(input: &InstanceNT, transcript: &[RuleApplication]) -> Result<InstanceNT, ReplayError> {
    transcript::replay(input, transcript)
}
