//! Batch safety check: random small instances, kernelized and compared with
//! the oracle before and after.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use spankern::graph::generate::random_connected;
use spankern::kernel::{kernelize_li, kernelize_lnt, KernelOptions, Outcome};
use spankern::oracle::{solve, Answer, Limits};
use spankern::{Graph, Instance, InstanceNT, VertexSet};

use crate::commands::SCHEMA;
use crate::input::{write_json, write_output};
use crate::{AuditArgs, Failure, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Serialize)]
struct Row {
    index: usize,
    n: usize,
    m: usize,
    p: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<usize>,
    k: usize,
    ell: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    nt: Option<usize>,
    outcome: &'static str,
    rules: usize,
    kernel_n: Option<usize>,
    before: Answer,
    after: Answer,
    status: Status,
}

#[derive(Serialize)]
struct Summary<'a> {
    schema: u32,
    problem: Problem,
    seed: u64,
    count: usize,
    passed: usize,
    failed: usize,
    inconclusive: usize,
    rows: &'a [Row],
}

/// Mostly connected graphs with `n <= max_n`, `m <= max_m`; some trees and
/// a few disconnected ones so the sanity checks get exercised.
fn random_graph(rng: &mut impl Rng, max_n: usize, max_m: usize) -> Graph {
    let n = rng.gen_range(1..=max_n.max(1));
    let cap = (n * (n - 1) / 2).min(max_m.max(n - 1));
    if n >= 2 && rng.gen_bool(0.05) {
        let mut pairs: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
        pairs.shuffle(rng);
        pairs.truncate(rng.gen_range(0..=cap.min(n - 2)));
        return Graph::new(n, pairs).expect("distinct pairs");
    }
    let m = if rng.gen_bool(0.1) { n - 1 } else { rng.gen_range(n - 1..=cap) };
    random_connected(n, m, rng).expect("m within range")
}

fn status(before: Answer, after: Answer) -> Status {
    match (before, after) {
        (Answer::Inconclusive, _) | (_, Answer::Inconclusive) => Status::Inconclusive,
        (a, b) if a == b => Status::Pass,
        _ => Status::Fail,
    }
}

fn after<I>(outcome: &Outcome<I>, solve: impl Fn(&I) -> Answer) -> (Answer, Option<&I>) {
    match outcome {
        Outcome::TrivialYes { .. } => (Answer::Yes, None),
        Outcome::TrivialNo { .. } => (Answer::No, None),
        Outcome::Reduced { instance }
        | Outcome::Delegated { instance }
        | Outcome::DelegationUnavailable { instance, .. } => (solve(instance), Some(instance)),
    }
}

fn audit_one(a: &AuditArgs, index: usize, limits: &Limits) -> Result<Row, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    rng.set_stream(index as u64);
    let g = random_graph(&mut rng, a.max_n, a.max_m);
    let n = g.n();
    let p = rng.gen_range(0..=a.max_pq.min(n));
    let k = rng.gen_range(1..=a.max_k.max(1));
    let ell = rng.gen_range(1..=a.max_ell.max(1));
    let opts = KernelOptions::default();
    let row = |q, nt, outcome, rules, kernel_n, before, after| Row {
        index,
        n,
        m: g.m(),
        p,
        q,
        k,
        ell,
        nt,
        outcome,
        rules,
        kernel_n,
        before,
        after,
        status: status(before, after),
    };
    match a.problem {
        Problem::Li => {
            let q = rng.gen_range(0..=a.max_pq.min(n));
            let inst = Instance::new(g.clone(), p, q, k, ell).map_err(Failure::internal)?;
            let res = kernelize_li(&inst, &opts).map_err(Failure::internal)?;
            let before = solve(inst.graph(), &inst.constraints(), limits).answer;
            let (after, out) = after(&res.outcome, |i: &Instance| solve(i.graph(), &i.constraints(), limits).answer);
            let kn = out.map(|i| i.graph().n());
            Ok(row(Some(q), None, res.outcome.name(), res.transcript.len(), kn, before, after))
        }
        Problem::Lnt => {
            let mut all: Vec<usize> = (1..=n).collect();
            all.shuffle(&mut rng);
            let size = rng.gen_range(0..=a.max_nt.min(n));
            let nt: VertexSet = all[..size].iter().copied().collect();
            let inst = InstanceNT::new(g.clone(), nt, p, k, ell).map_err(Failure::internal)?;
            let res = kernelize_lnt(&inst, &opts).map_err(Failure::internal)?;
            let before = solve(inst.graph(), &inst.constraints(), limits).answer;
            let (after, out) = after(&res.outcome, |i: &InstanceNT| solve(i.graph(), &i.constraints(), limits).answer);
            let kn = out.map(|i| i.graph().n());
            Ok(row(None, Some(size), res.outcome.name(), res.transcript.len(), kn, before, after))
        }
    }
}

fn table(rows: &[Row], problem: Problem) -> String {
    let mut out = String::new();
    let word = |x: Answer| match x {
        Answer::Yes => "yes",
        Answer::No => "no",
        Answer::Inconclusive => "?",
    };
    let param = if problem == Problem::Li { "q" } else { "|nt|" };
    writeln!(
        out,
        "{:>5} {:>3} {:>3} {:>3} {:>4} {:>3} {:>3}  {:<22} {:>5} {:>4}  {:<6} {:<6} status",
        "#", "n", "m", "p", param, "k", "ell", "outcome", "rules", "n'", "before", "after"
    )
    .unwrap();
    for r in rows {
        let extra = r.q.or(r.nt).unwrap_or(0);
        let kn = r.kernel_n.map_or("-".to_string(), |x| x.to_string());
        let st = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Inconclusive => "inconclusive",
        };
        writeln!(
            out,
            "{:>5} {:>3} {:>3} {:>3} {:>4} {:>3} {:>3}  {:<22} {:>5} {:>4}  {:<6} {:<6} {st}",
            r.index,
            r.n,
            r.m,
            r.p,
            extra,
            r.k,
            r.ell,
            r.outcome,
            r.rules,
            kn,
            word(r.before),
            word(r.after)
        )
        .unwrap();
    }
    out
}

pub fn run(a: &AuditArgs) -> crate::Outcome {
    if a.max_n == 0 {
        return Err(Failure::usage("--max-n must be at least 1"));
    }
    let limits = a.limits.limits();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.threads)
        .build()
        .map_err(Failure::internal)?;
    let rows: Vec<Row> = pool.install(|| {
        (0..a.count)
            .into_par_iter()
            .map(|i| audit_one(a, i, &limits))
            .collect::<Result<_, _>>()
    })?;
    let count = |s| rows.iter().filter(|r| r.status == s).count();
    let (passed, failed, inconclusive) = (count(Status::Pass), count(Status::Fail), count(Status::Inconclusive));
    if a.json {
        write_json(
            a.output.as_deref(),
            &Summary {
                schema: SCHEMA,
                problem: a.problem,
                seed: a.seed,
                count: a.count,
                passed,
                failed,
                inconclusive,
                rows: &rows,
            },
        )?;
    } else {
        let mut text = table(&rows, a.problem);
        writeln!(
            text,
            "{passed}/{} equivalence passes, {failed} failures, {inconclusive} inconclusive",
            a.count
        )
        .unwrap();
        write_output(a.output.as_deref(), &text)?;
    }
    if failed > 0 {
        return Err(Failure::internal(anyhow::anyhow!("{failed} instance(s) changed verdict under kernelization")));
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inconclusive_dominates() {
        assert_eq!(status(Answer::Yes, Answer::Yes), Status::Pass);
        assert_eq!(status(Answer::Yes, Answer::No), Status::Fail);
        assert_eq!(status(Answer::Inconclusive, Answer::No), Status::Inconclusive);
        assert_eq!(status(Answer::No, Answer::Inconclusive), Status::Inconclusive);
    }

    #[test]
    fn random_graphs_respect_the_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut disconnected = 0;
        for _ in 0..500 {
            let g = random_graph(&mut rng, 9, 14);
            assert!(g.n() <= 9 && g.m() <= 14.max(g.n() - 1));
            disconnected += !g.is_connected() as usize;
        }
        assert!(disconnected > 0);
    }
}
