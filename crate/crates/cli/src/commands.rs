use std::path::Path;

use anyhow::{anyhow, Context};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use spankern::blackbox::{ExactDecider, KernelBlackBox, NoBlackBox};
use spankern::diversify::{construct_family, verify_family, verify_trees, FamilyReport};
use spankern::graph::generate::{self, Family};
use spankern::graph::io::{read_graph, write_graph};
use spankern::kernel::{
    kernelize_li, kernelize_lnt, lift_family, write_transcript, KernelOptions, KernelResult, Outcome, Witness,
};
use spankern::oracle::{solve as oracle_solve, Answer, OracleVerdict};
use spankern::{Constraints, Graph, SpanningTree, VertexSet};

use crate::input::{load_family, load_graph, load_instance, load_nonterminals, write_json, write_output, Loaded};
use crate::{
    BlackBoxChoice, ConstructArgs, Failure, FamilyFormat, FamilyName, GenArgs, KernelizeArgs, Outcome as Exit,
    Problem, SolveArgs, VerifyArgs,
};

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
struct KernelReport<'a, I: Serialize> {
    schema: u32,
    problem: Problem,
    #[serde(flatten)]
    result: &'a KernelResult<I>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
}

pub fn kernelize(a: &KernelizeArgs) -> Exit {
    let inst = load_instance(&a.instance)?;
    let blackbox: &dyn KernelBlackBox = match a.blackbox {
        BlackBoxChoice::Exact => &ExactDecider::DEFAULT,
        BlackBoxChoice::None => &NoBlackBox,
    };
    let opts = KernelOptions {
        witness: a.witness,
        blackbox,
    };
    let limits = a.limits.limits();
    match &inst {
        Loaded::Li(i) => {
            let result = kernelize_li(i, &opts).map_err(Failure::internal)?;
            let solve = |k: &spankern::Instance| oracle_solve(k.graph(), &k.constraints(), &limits);
            emit(a, Problem::Li, &inst, &result, solve)
        }
        Loaded::Lnt(i) => {
            let result = kernelize_lnt(i, &opts).map_err(Failure::internal)?;
            let solve = |k: &spankern::InstanceNT| oracle_solve(k.graph(), &k.constraints(), &limits);
            emit(a, Problem::Lnt, &inst, &result, solve)
        }
    }
}

fn emit<I: Serialize>(
    a: &KernelizeArgs,
    problem: Problem,
    input: &Loaded,
    result: &KernelResult<I>,
    solve: impl Fn(&I) -> OracleVerdict,
) -> Exit {
    log::info!("{} after {} transcript entries", result.outcome.name(), result.transcript.len());
    let mut witness = None;
    match &result.outcome {
        Outcome::TrivialYes { witness: Some(w) } => check_witness(input, &w.trees)?,
        Outcome::Reduced { instance } if a.witness => {
            let verdict = solve(instance);
            match (verdict.answer, verdict.witness) {
                (Answer::Yes, Some(kernel_trees)) => {
                    let trees = lift_family(&result.transcript, input.graph(), &kernel_trees)
                        .context("lifting the kernel witness")
                        .map_err(Failure::internal)?;
                    check_witness(input, &trees)?;
                    witness = Some(Witness { trees, kernel_trees });
                }
                (answer, _) => log::info!("no witness: reduced instance answered {answer:?}"),
            }
        }
        _ => {}
    }
    if let Some(path) = &a.transcript {
        write_output(Some(path), &write_transcript(&result.transcript))?;
    }
    let report = KernelReport {
        schema: SCHEMA,
        problem,
        result,
        witness,
    };
    write_json(a.output.as_deref(), &report)?;
    Ok(0)
}

fn check_witness(input: &Loaded, trees: &[SpanningTree]) -> Result<(), Failure> {
    let report = verify_trees(input.graph(), trees, &input.constraints());
    if report.passed {
        Ok(())
    } else {
        Err(Failure::internal(anyhow!("constructed witness failed verification")))
    }
}

#[derive(Serialize)]
struct SolveReport<'a> {
    schema: u32,
    problem: Problem,
    #[serde(flatten)]
    verdict: &'a OracleVerdict,
}

pub fn solve(a: &SolveArgs) -> Exit {
    let inst = load_instance(&a.instance)?;
    let verdict = oracle_solve(inst.graph(), &inst.constraints(), &a.limits.limits());
    log::info!("{} trees enumerated, {} feasible", verdict.stats.trees, verdict.stats.feasible);
    write_json(
        a.output.as_deref(),
        &SolveReport {
            schema: SCHEMA,
            problem: a.instance.problem,
            verdict: &verdict,
        },
    )?;
    Ok(match verdict.answer {
        Answer::Yes => 0,
        Answer::No => 1,
        Answer::Inconclusive => 2,
    })
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    schema: u32,
    problem: Problem,
    #[serde(flatten)]
    report: &'a FamilyReport,
}

pub fn verify(a: &VerifyArgs) -> Exit {
    let inst = load_instance(&a.instance)?;
    let family = load_family(&a.family)?;
    let report = verify_family(inst.graph(), &family, &inst.constraints());
    write_json(
        a.output.as_deref(),
        &VerifyReport {
            schema: SCHEMA,
            problem: a.instance.problem,
            report: &report,
        },
    )?;
    Ok(if report.passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct ConstructReport<'a> {
    schema: u32,
    k: usize,
    ell: usize,
    nonterminals: &'a VertexSet,
    seed_leaves: usize,
    grown_leaves: usize,
    blocks: &'a [Vec<usize>],
    family: &'a [SpanningTree],
    report: &'a FamilyReport,
}

pub fn construct(a: &ConstructArgs) -> Exit {
    let g = load_graph(a.input.as_deref())?;
    let nt = load_nonterminals(a.nt.as_deref(), a.nt_file.as_ref(), g.n())?;
    let seed = a.seed_tree.as_deref().map(|p| load_tree(&g, p)).transpose()?;
    let built = construct_family(&g, &nt, a.k, a.ell, seed.as_ref())
        .context("construction preconditions not met")
        .map_err(Failure::data)?;
    let c = Constraints {
        k: a.k,
        ell: a.ell,
        nonterminals: nt.clone(),
        ..Constraints::default()
    };
    let report = verify_trees(&g, &built.family, &c);
    if !report.passed {
        return Err(Failure::internal(anyhow!("constructed family failed verification")));
    }
    match a.format {
        FamilyFormat::Edges => {
            let text: String = built.family.iter().map(SpanningTree::to_edge_list).collect();
            write_output(a.output.as_deref(), &text)?;
        }
        FamilyFormat::Json => write_json(
            a.output.as_deref(),
            &ConstructReport {
                schema: SCHEMA,
                k: a.k,
                ell: a.ell,
                nonterminals: &nt,
                seed_leaves: built.seed.leaf_count(),
                grown_leaves: built.grown.leaf_count(),
                blocks: built.plan.blocks(),
                family: &built.family,
                report: &report,
            },
        )?,
    }
    Ok(0)
}

fn load_tree(g: &Graph, path: &Path) -> Result<SpanningTree, Failure> {
    let text = crate::input::read_text(Some(path))?;
    let t = read_graph(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::data)?;
    SpanningTree::new(g, t.edges().iter().copied())
        .with_context(|| format!("{} is not a spanning tree of the input", path.display()))
        .map_err(Failure::data)
}

pub fn gen(a: &GenArgs) -> Exit {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::usage(format!("{:?} needs {flag}", a.family)));
    let family = match a.family {
        FamilyName::RandomConnected => Family::RandomConnected {
            n: need(a.n, "-n")?,
            m: need(a.m, "-m")?,
        },
        FamilyName::Cycle => Family::Cycle { n: need(a.n, "-n")? },
        FamilyName::Path => Family::Path { n: need(a.n, "-n")? },
        FamilyName::Complete => Family::Complete { n: need(a.n, "-n")? },
        FamilyName::Star => Family::Star { leaves: need(a.n, "-n")? },
        FamilyName::CubeLike => Family::CubeLike { n: need(a.n, "-n")? },
        FamilyName::Theta => {
            let l = a.lengths.as_deref().ok_or_else(|| Failure::usage("theta needs --lengths A B C"))?;
            Family::Theta { a: l[0], b: l[1], c: l[2] }
        }
        FamilyName::Hypercube => Family::Hypercube {
            dim: a.dim.ok_or_else(|| Failure::usage("hypercube needs --dim"))?,
        },
    };
    let mut g = generate::generate(&family, a.seed).map_err(Failure::data)?;
    if a.relabel {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (1..=g.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(a.seed ^ 0x5eed));
        g = g.permute(&perm);
    }
    write_output(a.output.as_deref(), &write_graph(&g))?;
    Ok(0)
}
