//! `dembed`: build trees and diamond graphs, query exact distances,
//! construct and search embeddings, and run the verification suites.
//!
//! Exit codes: 0 success/pass, 1 check failure, 2 usage or parse error,
//! 3 budget exceeded.

mod cmds;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dembed_core::exec::Parallelism;

#[derive(Parser)]
#[command(
    name = "dembed",
    version,
    about = "Trees, diamond graphs, and embedding distortion"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Materialization budget, in vertices.
    #[arg(long, global = true, default_value_t = 200_000)]
    budget_vertices: u64,

    /// Exact-search node budget, split over top-level branches.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_nodes: u64,

    /// Region size budget for exact separated-set mode.
    #[arg(long, global = true, default_value_t = 60)]
    budget_region: usize,

    /// Base seed for randomized restarts.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the primary artifact to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Run sweeps and searches on all cores. Results are identical to
    /// sequential runs; only wall time changes.
    #[cfg(feature = "parallel")]
    #[arg(long, global = true)]
    parallel: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Materialize a graph and write it as an edge list or DOT.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Exact distance between two vertices, without materialization.
    Dist {
        #[command(subcommand)]
        kind: DistKind,
    },
    /// Embed a binary tree into a diamond graph and report distortion.
    Embed(EmbedArgs),
    /// Distortion table over a range of tree depths.
    Table(TableArgs),
    /// Find a separated set in a diamond region.
    Sepset(SepsetArgs),
    /// Run a verification suite; exits 0 iff every check passes.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Full binary tree of depth n.
    Tree {
        #[arg(short)]
        n: u32,
        #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
        format: GraphFormat,
    },
    /// Diamond graph of level m and branching k.
    Diamond {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
        format: GraphFormat,
    },
}

#[derive(Subcommand)]
enum DistKind {
    /// Distance between two tree vertices (bit strings; the root is `-`).
    Tree { u: String, v: String },
    /// Distance between two diamond addresses in D_{m,k}.
    Diamond {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        u: String,
        v: String,
    },
}

#[derive(Args)]
struct EmbedArgs {
    /// Tree depth.
    #[arg(short)]
    n: u32,
    #[arg(long, value_enum)]
    mode: EmbedMode,
    /// Target level (exact/local modes; star picks its own).
    #[arg(short)]
    m: Option<u32>,
    /// Target branching (exact/local modes).
    #[arg(short)]
    k: Option<u32>,
    /// Hill-climbing restarts (local mode).
    #[arg(long)]
    restarts: Option<u32>,
    /// Inclusive distortion bound `p/q` to prune against (exact mode).
    #[arg(long)]
    prune_bound: Option<String>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmbedMode {
    Star,
    Exact,
    Local,
}

#[derive(Args)]
struct TableArgs {
    /// First tree depth, inclusive.
    #[arg(long)]
    n_min: u32,
    /// Last tree depth, inclusive; below n-min means an empty table.
    #[arg(long)]
    n_max: u32,
    /// Which distortion columns to fill.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "star")]
    modes: Vec<TableMode>,
    /// Search target level (needed by exact/local modes).
    #[arg(short)]
    m: Option<u32>,
    /// Search target branching (needed by exact/local modes).
    #[arg(short)]
    k: Option<u32>,
    /// Hill-climbing restarts (local mode).
    #[arg(long)]
    restarts: Option<u32>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableMode {
    Star,
    Exact,
    Local,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct SepsetArgs {
    #[arg(short)]
    m: u32,
    #[arg(short)]
    k: u32,
    /// Minimum pairwise distance within the set.
    #[arg(long)]
    separation: u64,
    /// Subdiamond to search in: refinement steps like `1L.2U`, or `-`
    /// for the whole graph.
    #[arg(long, default_value = "-")]
    region: String,
    #[arg(long, value_enum, default_value_t = SepsetMode::Exact)]
    mode: SepsetMode,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SepsetMode {
    Exact,
    Greedy,
}

#[derive(Subcommand)]
enum VerifySuite {
    /// All-pairs oracle distances against BFS ground truth.
    Oracle {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Neighborhood-structure and component-diameter sweeps.
    Observations {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Exact separated-set sizes against the counting bound.
    Lemma {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        /// Largest level gap q - p to sweep.
        #[arg(long, default_value_t = 2)]
        max_gap: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Feasibility of the lower-bound inequality system.
    Witness {
        /// Tree depth.
        #[arg(short)]
        n: u64,
        #[arg(short)]
        k: u32,
        /// Scaling exponent.
        #[arg(short, default_value_t = 0)]
        p: u32,
        /// Literal value `p/q` for the distortion stand-in.
        #[arg(long, conflicts_with = "alpha_schedule")]
        alpha: Option<String>,
        #[arg(long, value_enum)]
        alpha_schedule: Option<AlphaSchedule>,
        /// Rational multiplier applied to the schedule value.
        #[arg(long, requires = "alpha_schedule")]
        alpha_scale: Option<String>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlphaSchedule {
    /// n / (log2 n)^2; needs n to be a power of two.
    NOverLog2sq,
    /// n / log2 n; needs n to be a power of two.
    NOverLog2,
    /// n / 3.
    #[value(name = "n-over-3")]
    NOver3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Edges,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

/// Effective run-wide settings handed to every command.
struct Ctx {
    budget_vertices: u64,
    budget_nodes: u64,
    budget_region: usize,
    seed: u64,
    out: Option<PathBuf>,
    par: Parallelism,
    started: Instant,
}

/// Failures ranked by the exit-code contract.
enum CmdError {
    /// Exit 1: a verified property does not hold, or no artifact satisfies
    /// the request.
    Check(String),
    /// Exit 2: arguments that cannot be acted on.
    Usage(String),
    /// Exit 3: the answer exists but exceeds a configured budget.
    Budget(String),
    /// Exit 1: the artifact could not be written.
    Io(String),
}

impl CmdError {
    fn exit_code(&self) -> u8 {
        match self {
            CmdError::Check(_) | CmdError::Io(_) => 1,
            CmdError::Usage(_) => 2,
            CmdError::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Check(m) | CmdError::Usage(m) | CmdError::Budget(m) | CmdError::Io(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        budget_vertices: cli.budget_vertices,
        budget_nodes: cli.budget_nodes,
        budget_region: cli.budget_region,
        seed: cli.seed,
        out: cli.out,
        #[cfg(feature = "parallel")]
        par: if cli.parallel {
            Parallelism::Rayon
        } else {
            Parallelism::Sequential
        },
        #[cfg(not(feature = "parallel"))]
        par: Parallelism::Sequential,
        started: Instant::now(),
    };
    let result = match cli.command {
        Cmd::Gen { kind } => cmds::gen(&ctx, kind),
        Cmd::Dist { kind } => cmds::dist(&ctx, kind),
        Cmd::Embed(args) => cmds::embed(&ctx, args),
        Cmd::Table(args) => cmds::table(&ctx, args),
        Cmd::Sepset(args) => cmds::sepset(&ctx, args),
        Cmd::Verify { suite } => cmds::verify(&ctx, suite),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
