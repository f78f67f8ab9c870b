use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod audit;
mod commands;
mod input;

/// Exit statuses beyond the subcommand-specific 0/1/2.
pub mod status {
    pub const USAGE: u8 = 64;
    pub const DATA: u8 = 65;
    pub const INTERNAL: u8 = 70;
}

#[derive(Parser, Debug)]
#[command(name = "spankern", version, about = "Kernelize and solve constrained diverse spanning tree instances")]
struct Cli {
    /// Raise log verbosity (repeatable); logs go to stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the reduction pipeline and print the outcome as JSON.
    Kernelize(KernelizeArgs),
    /// Decide an instance exactly; exit 0 = yes, 1 = no, 2 = inconclusive.
    Solve(SolveArgs),
    /// Check a family of trees against an instance; exit 0 = valid, 1 = invalid.
    Verify(VerifyArgs),
    /// Build a diverse family on a graph with no long degree-2 paths.
    Construct(ConstructArgs),
    /// Print a graph from a named family as an edge list.
    Gen(GenArgs),
    /// Kernelize random small instances and check each against the oracle.
    Audit(AuditArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// Leaves and internal vertices: (G, p, q, k, ell).
    Li,
    /// Leaves and non-terminals: (G, V_NT, p, k, ell).
    Lnt,
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    /// Minimum leaves per tree.
    #[arg(short, default_value_t = 0)]
    pub p: usize,
    /// Minimum internal vertices per tree (li only).
    #[arg(short)]
    pub q: Option<usize>,
    /// Minimum pairwise distance.
    #[arg(short)]
    pub k: usize,
    /// Number of trees.
    #[arg(short = 'l', long = "ell")]
    pub ell: usize,
    /// Non-terminals, comma or space separated (lnt only).
    #[arg(long, conflicts_with = "nt_file")]
    pub nt: Option<String>,
    /// File listing the non-terminals (lnt only).
    #[arg(long)]
    pub nt_file: Option<PathBuf>,
    /// Graph in edge-list format; stdin if absent or `-`.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct LimitArgs {
    /// Stop enumerating after this many spanning trees.
    #[arg(long, default_value_t = spankern::oracle::Limits::default().max_trees)]
    pub max_trees: usize,
    /// Budget for the clique search.
    #[arg(long, default_value_t = spankern::oracle::Limits::default().max_nodes)]
    pub max_nodes: u64,
}

impl LimitArgs {
    pub fn limits(&self) -> spankern::oracle::Limits {
        spankern::oracle::Limits {
            max_trees: self.max_trees,
            max_nodes: self.max_nodes,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BlackBoxChoice {
    /// Decide the delegated instance by enumeration and emit a canonical answer.
    Exact,
    /// Never delegate; keep the equivalent instance.
    None,
}

#[derive(Args, Debug)]
pub struct KernelizeArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Output path; stdout if absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the transcript as JSON lines to this path.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Emit a witness family on the input graph when the answer is yes.
    #[arg(long)]
    pub witness: bool,
    #[arg(long, value_enum, default_value_t = BlackBoxChoice::Exact)]
    pub blackbox: BlackBoxChoice,
    /// Oracle limits used when solving a reduced instance for `--witness`.
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Trees as edge-list blocks, or JSON output of `kernelize`, `solve` or `construct`.
    #[arg(long)]
    pub family: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyFormat {
    Json,
    Edges,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(short)]
    pub k: usize,
    #[arg(short = 'l', long = "ell")]
    pub ell: usize,
    /// Vertices to keep internal in every tree.
    #[arg(long, conflicts_with = "nt_file")]
    pub nt: Option<String>,
    #[arg(long)]
    pub nt_file: Option<PathBuf>,
    /// Starting tree (edge list); required when non-terminals are given.
    #[arg(long)]
    pub seed_tree: Option<PathBuf>,
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FamilyFormat::Json)]
    pub format: FamilyFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    RandomConnected,
    Cycle,
    Path,
    Complete,
    Star,
    Theta,
    CubeLike,
    Hypercube,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: FamilyName,
    /// Vertex count (random-connected, cycle, path, complete, cube-like) or
    /// leaf count (star).
    #[arg(short, long)]
    pub n: Option<usize>,
    /// Edge count (random-connected).
    #[arg(short, long)]
    pub m: Option<usize>,
    /// Path lengths (theta).
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"])]
    pub lengths: Option<Vec<usize>>,
    /// Dimension (hypercube).
    #[arg(long)]
    pub dim: Option<u32>,
    /// Shuffle vertex ids.
    #[arg(long)]
    pub relabel: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 9)]
    pub max_n: usize,
    #[arg(long, default_value_t = 14)]
    pub max_m: usize,
    /// Upper bound for p and q.
    #[arg(long, default_value_t = 4)]
    pub max_pq: usize,
    #[arg(long, default_value_t = 4)]
    pub max_k: usize,
    #[arg(long, default_value_t = 3)]
    pub max_ell: usize,
    #[arg(long, default_value_t = 3)]
    pub max_nt: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// An error with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: status::USAGE,
            error: anyhow::anyhow!(msg.into()),
        }
    }

    pub fn data(error: impl Into<anyhow::Error>) -> Failure {
        Failure {
            code: status::DATA,
            error: error.into(),
        }
    }

    pub fn internal(error: impl Into<anyhow::Error>) -> Failure {
        Failure {
            code: status::INTERNAL,
            error: error.into(),
        }
    }
}

pub type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { status::USAGE } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("SPANKERN_LOG")
        .init();

    let result = match cli.command {
        Command::Kernelize(a) => commands::kernelize(&a),
        Command::Solve(a) => commands::solve(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Construct(a) => commands::construct(&a),
        Command::Gen(a) => commands::gen(&a),
        Command::Audit(a) => audit::run(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
