//! `iopart`: command-line front end for the partition library.

mod audit;
mod bench;
mod fail;
mod graphs;
mod hardness;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fail::Fail;
use output::{Format, Sink};

#[derive(Parser)]
#[command(
    name = "iopart",
    version,
    about = "Vertex partitions into an independent set and small components"
)]
struct Cli {
    /// Output format; not every verb offers all three.
    #[arg(long, global = true, value_enum, default_value_t)]
    format: Format,
    /// Write the main result here instead of standard output.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; only `bench` uses more than one.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Exact maximum average degree and a densest subgraph.
    Mad { graph: PathBuf },
    /// Find a partition.
    Solve(SolveArgs),
    /// Check a coloring file against a spec.
    Verify {
        graph: PathBuf,
        coloring: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Generate a seeded random graph.
    Gen(GenArgs),
    /// Replace every edge by a path.
    Subdivide {
        graph: PathBuf,
        /// New vertices per edge.
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Build the reduction graph of a restricted DIMACS CNF.
    ReduceSat(hardness::ReduceArgs),
    /// Certify a gadget by exhaustive search.
    CertifyGadget(hardness::CertifyArgs),
    /// Search for a gadget.
    MineGadget(hardness::MineArgs),
    /// Discharge an exhausted repair state and audit the result.
    AuditDischarge {
        state: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Time solvers on a seeded corpus.
    Bench(bench::BenchArgs),
}

#[derive(Args, Clone)]
pub struct SpecArgs {
    /// `o<k>` or `p<k>`; `o`, `p`, `ok` and `pk` take k from `--k`.
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Thm1,
    Thm2,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Exact,
    Recursive,
}

#[derive(Args)]
pub struct SolveArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "exact")]
    pub oracle: Oracle,
    /// Node budget for the exact method.
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// thm1: charge ledger of the residual graph, as TSV.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
    /// thm2: the exhausted state, as JSON.
    #[arg(long)]
    pub state: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Sparse,
    Gnp,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "sparse")]
    pub model: Model,
    /// Strict bound on mad for the sparse model.
    #[arg(long, default_value = "5/2")]
    pub cap: String,
    /// Edge probability for the gnp model.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
}

fn run(cli: Cli) -> fail::Run {
    let sink = Sink {
        format: cli.format,
        out: cli.out,
    };
    match cli.verb {
        Verb::Mad { graph } => graphs::mad(&graph, &sink),
        Verb::Solve(args) => graphs::solve(&args, &sink),
        Verb::Verify {
            graph,
            coloring,
            spec,
        } => graphs::verify(&graph, &coloring, &spec, &sink),
        Verb::Gen(args) => graphs::gen(&args, &sink),
        Verb::Subdivide { graph, t } => graphs::subdivide(&graph, t, &sink),
        Verb::ReduceSat(args) => hardness::reduce(&args, &sink),
        Verb::CertifyGadget(args) => hardness::certify(&args, &sink),
        Verb::MineGadget(args) => hardness::mine(&args, &sink),
        Verb::AuditDischarge { state, k } => audit::audit(&state, k, &sink),
        Verb::Bench(args) => bench::bench(&args, cli.workers.max(1), &sink),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.report());
            ExitCode::from(f.exit_code())
        }
    }
}

pub fn resolve_spec(args: &SpecArgs) -> Result<iopart::partition::PartitionSpec, Fail> {
    use iopart::partition::PartitionSpec;
    let s = args.spec.trim().to_ascii_lowercase();
    let family = match s.as_str() {
        "o" | "ok" => Some(PartitionSpec::order as fn(usize) -> PartitionSpec),
        "p" | "pk" => Some(PartitionSpec::path as fn(usize) -> PartitionSpec),
        _ => None,
    };
    match (family, args.k) {
        (Some(f), Some(k)) if k >= 1 => Ok(f(k)),
        (Some(_), _) => Err(Fail::config(format!("--spec {s} needs --k at least 1"))),
        (None, k) => {
            let spec: PartitionSpec = s.parse().map_err(Fail::config)?;
            match k {
                Some(k) if k != spec.k => {
                    Err(Fail::config(format!("--k {k} contradicts --spec {spec}")))
                }
                _ => Ok(spec),
            }
        }
    }
}
