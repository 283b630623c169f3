mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "turan", version, about = "Induced densities, constructions and semi-definite certificates for small uniform graphs")]
pub struct Cli {
    /// Output format; `structured` prints one JSON document.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Cmd,
}

/// Which graphs are allowed at all.
#[derive(Debug, Clone, Args)]
pub struct UniverseArgs {
    /// Edge size of the graphs (2 or 3). Inferred from the target when omitted.
    #[arg(long)]
    pub arity: Option<usize>,
    /// Work with directed graphs.
    #[arg(long)]
    pub directed: bool,
    /// Allow digons (both uv and vu) in directed graphs.
    #[arg(long)]
    pub digons: bool,
    /// Forbidden graph or named family, as a (not necessarily induced) subgraph. Repeatable.
    #[arg(long = "forbid", value_name = "GRAPH")]
    pub forbid: Vec<String>,
    /// Forbidden graph or named family, as an induced subgraph. Repeatable.
    #[arg(long = "forbid-induced", value_name = "GRAPH")]
    pub forbid_induced: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// List the isomorphism classes of admissible graphs on n vertices.
    Enumerate {
        #[arg(long, short)]
        order: usize,
        #[command(flatten)]
        universe: UniverseArgs,
        /// Only print the count.
        #[arg(long)]
        count: bool,
    },
    /// Exact induced density of a target in a graph.
    Density {
        /// Target graph or named family (densities of members are summed).
        #[arg(long)]
        target: String,
        /// Host graph, e.g. `5:123,234,345,145,125`.
        #[arg(long)]
        graph: String,
    },
    /// Limit density of a target in a blow-up.
    Blowup {
        /// Pattern, e.g. `parts=3; weights=1/3,1/3,1/3; edges=112,223,331,123`.
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        target: String,
    },
    /// Limit density of a target in an iterated blow-up.
    Iterate {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        target: String,
        /// Make every part recursive.
        #[arg(long)]
        all: bool,
    },
    /// Maximise a target density over the part weights of a pattern.
    Optimize {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        target: String,
        /// Absolute tolerance on the optimal value (at least 1e-12).
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// The random geometric parity construction.
    Geometric {
        /// Exact distribution of the induced graph on h points (4 to 6).
        #[arg(long, conflicts_with_all = ["order", "trials"])]
        exact: Option<usize>,
        /// Number of points for sampling.
        #[arg(long, short)]
        order: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Assemble the semi-definite problem and write it in sparse SDPA format.
    SdpExport {
        /// Order N of the admissible graphs.
        #[arg(long, short)]
        order: usize,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        universe: UniverseArgs,
        /// SDPA output file.
        #[arg(long)]
        out: std::path::PathBuf,
        /// Problem description file (default: the output path with extension `.prob`).
        #[arg(long)]
        problem: Option<std::path::PathBuf>,
    },
    /// Round a solver solution to an exact certificate.
    SdpRound {
        /// Problem description written by `sdp-export`.
        #[arg(long)]
        problem: std::path::PathBuf,
        /// Solution file in the CSDP layout.
        #[arg(long)]
        solution: std::path::PathBuf,
        /// Largest denominator used when rounding.
        #[arg(long, default_value_t = 1024)]
        denom_bound: u64,
        /// Certificate output file.
        #[arg(long)]
        out: std::path::PathBuf,
    },
    /// Verify a certificate exactly.
    Verify {
        #[arg(long)]
        cert: std::path::PathBuf,
        #[arg(long)]
        problem: std::path::PathBuf,
    },
    /// Exhaustive maximum number of induced copies of a target.
    Oracle {
        #[arg(long)]
        target: String,
        /// A single order n.
        #[arg(long, short, conflicts_with = "range")]
        order: Option<usize>,
        /// A range of orders, e.g. `4..6`; checks the densities are nonincreasing.
        #[arg(long)]
        range: Option<String>,
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// Recompute the reproduction table and report pass/fail per row.
    Reproduce {
        /// Only these criteria (1 to 8). Repeatable.
        #[arg(long = "criterion", short)]
        criteria: Vec<u8>,
        /// Solver command for the end-to-end semi-definite row, e.g.
        /// `python3 scripts/solve_sdpa.py`.
        #[arg(long)]
        solver: Option<String>,
    },
}

fn init_threads() {
    if let Ok(v) = std::env::var("TURAN_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
