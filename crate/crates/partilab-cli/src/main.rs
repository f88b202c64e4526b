//! Command-line driver for the partitioning toolkit: exact and greedy
//! solvers, the noisy-feedback ordering learner, data ingestion, a
//! brute-force audit oracle, and manifest-based replay.
//!
//! Exit codes: 0 success, 2 validation error, 3 enumeration or budget
//! limit exceeded, 4 I/O failure.

mod ingest;
mod learn;
mod manifest;
mod oracle;
mod solve;

use clap::{Args, Parser, Subcommand, ValueEnum};
use partilab::core::ObjectiveKind;
use partilab::general_solvers::DEFAULT_ENUMERATION_CAP;
use partilab::io::read_scores_csv;
use partilab::simenv::NoiseModel;
use partilab::{Error, Result};
use std::path::Path;

use crate::manifest::ResolvedCommand;
use crate::solve::InputSpec;

const DEFAULT_CAP: u64 = DEFAULT_ENUMERATION_CAP as u64;

#[derive(Parser)]
#[command(
    name = "partilab",
    version,
    about = "Fixed-size group partitioning: solvers, a noisy ordering learner, and reproducible experiment traces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition one instance under a chosen objective.
    Solve(SolveArgs),
    /// Run seeded repetitions of the ordering learner and write traces.
    Learn(LearnArgs),
    /// Sample a subgraph and derive feature-overlap scores.
    Ingest(IngestArgs),
    /// Exact brute-force optimum, reporting the enumerated count.
    Oracle(OracleArgs),
    /// Re-execute a recorded run from its manifest.
    Replay(ReplayArgs),
}

/// CLI spelling of the four objectives.
#[derive(Debug, Clone, Copy, ValueEnum)]
#[clap(rename_all = "lowercase")]
enum ObjectiveArg {
    Aoa,
    Mom,
    Aom,
    Moa,
}

impl From<ObjectiveArg> for ObjectiveKind {
    fn from(arg: ObjectiveArg) -> Self {
        match arg {
            ObjectiveArg::Aoa => ObjectiveKind::AoA,
            ObjectiveArg::Mom => ObjectiveKind::MoM,
            ObjectiveArg::Aom => ObjectiveKind::AoM,
            ObjectiveArg::Moa => ObjectiveKind::MoA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[clap(rename_all = "lowercase")]
enum NoiseArg {
    None,
    Uniform,
}

#[derive(Args)]
struct SolveArgs {
    /// Compatibility matrix CSV (dense, symmetric, no header).
    #[arg(long, conflicts_with = "scores")]
    input: Option<String>,
    /// Item score CSV with an item,score header.
    #[arg(long)]
    scores: Option<String>,
    /// Group size; must divide the item count.
    #[arg(long)]
    k: usize,
    /// Objective to optimize.
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    /// Solver; auto picks an exact polynomial one when it applies.
    #[arg(long, value_enum, default_value = "auto")]
    method: solve::Method,
    /// Partition-count cap for brute-force enumeration.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Output directory for partition.txt and manifest.json.
    #[arg(long, default_value = ".")]
    out_dir: String,
}

#[derive(Args)]
struct LearnArgs {
    /// Item count; inferred from --scores when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Groups per round; defaults to n / k.
    #[arg(long)]
    m: Option<usize>,
    /// Group size; must divide the item count.
    #[arg(long)]
    k: usize,
    /// Target failure probability for ordering recovery.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Explicit per-edge budget; omitted means the auto formula.
    #[arg(long)]
    rounds_per_edge: Option<usize>,
    /// Score-gap guess for the auto budget.
    #[arg(long)]
    delta_guess: Option<f64>,
    /// Noise model applied to every response.
    #[arg(long, value_enum, default_value = "none")]
    noise: NoiseArg,
    /// Noise half-width for --noise uniform.
    #[arg(long, default_value_t = 0.0)]
    noise_bound: f64,
    /// Independent repetitions to run and average.
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Fixed score CSV; omitted draws uniform integer scores per run.
    #[arg(long)]
    scores: Option<String>,
    /// RNG seed; falls back to PARTILAB_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for trace.csv, mean_curve.csv, manifest.json.
    #[arg(long, default_value = ".")]
    out_dir: String,
}

#[derive(Args)]
struct IngestArgs {
    /// Edge list file, one `u v` or `u,v[,w]` pair per line.
    #[arg(long)]
    input: String,
    /// JSON file mapping node ids to feature token lists.
    #[arg(long)]
    features: String,
    /// Number of nodes to sample.
    #[arg(long)]
    n: usize,
    /// RNG seed; falls back to PARTILAB_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for scores.csv, nodes.csv, manifest.json.
    #[arg(long, default_value = ".")]
    out_dir: String,
}

#[derive(Args)]
struct OracleArgs {
    /// Compatibility matrix CSV (dense, symmetric, no header).
    #[arg(long, conflicts_with = "scores")]
    input: Option<String>,
    /// Item score CSV with an item,score header.
    #[arg(long)]
    scores: Option<String>,
    /// Group size; must divide the item count.
    #[arg(long)]
    k: usize,
    /// Objective to optimize.
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    /// Partition-count cap for the enumeration.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Output directory for partition.txt and manifest.json.
    #[arg(long, default_value = ".")]
    out_dir: String,
}

#[derive(Args)]
struct ReplayArgs {
    /// manifest.json recorded by a previous run.
    #[arg(long)]
    input: String,
    /// Fresh output directory for the reproduced files.
    #[arg(long)]
    out_dir: String,
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {}", err);
        std::process::exit(exit_code(&err));
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InstanceTooLarge(_) | Error::BudgetExhausted(_) => 3,
        Error::Io(_) => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => {
            let spec = solve::SolveSpec {
                input: input_spec(args.input, args.scores)?,
                k: args.k,
                objective: args.objective.into(),
                method: args.method,
                cap: args.cap,
            };
            solve::execute(&spec, Path::new(&args.out_dir))
        }
        Command::Learn(args) => {
            let spec = learn_spec(args)?;
            let out_dir = spec.1;
            learn::execute(&spec.0, Path::new(&out_dir))
        }
        Command::Ingest(args) => {
            let spec = ingest::IngestSpec {
                edges: args.input,
                features: args.features,
                size: args.n,
                seed: resolve_seed(args.seed)?,
            };
            ingest::execute(&spec, Path::new(&args.out_dir))
        }
        Command::Oracle(args) => {
            let spec = oracle::OracleSpec {
                input: input_spec(args.input, args.scores)?,
                k: args.k,
                objective: args.objective.into(),
                cap: args.cap,
            };
            oracle::execute(&spec, Path::new(&args.out_dir))
        }
        Command::Replay(args) => {
            let recorded = manifest::load(Path::new(&args.input))?;
            manifest::verify_inputs(&recorded)?;
            let out_dir = Path::new(&args.out_dir);
            match recorded.command {
                ResolvedCommand::Solve(spec) => solve::execute(&spec, out_dir),
                ResolvedCommand::Learn(spec) => learn::execute(&spec, out_dir),
                ResolvedCommand::Ingest(spec) => ingest::execute(&spec, out_dir),
                ResolvedCommand::Oracle(spec) => oracle::execute(&spec, out_dir),
            }
        }
    }
}

fn input_spec(input: Option<String>, scores: Option<String>) -> Result<InputSpec> {
    match (input, scores) {
        (Some(path), None) => Ok(InputSpec::Matrix { path }),
        (None, Some(path)) => Ok(InputSpec::Scores { path }),
        _ => Err(Error::InvalidConfig(
            "give exactly one of --input and --scores".into(),
        )),
    }
}

fn learn_spec(args: LearnArgs) -> Result<(learn::LearnSpec, String)> {
    let n = match (&args.scores, args.n) {
        (Some(path), given) => {
            let len = read_scores_csv(path)?.len();
            if let Some(n) = given {
                if n != len {
                    return Err(Error::InvalidConfig(format!(
                        "--n {} disagrees with the {} items in {}",
                        n, len, path
                    )));
                }
            }
            len
        }
        (None, Some(n)) => n,
        (None, None) => {
            return Err(Error::InvalidConfig(
                "give --n or a --scores file to size the run".into(),
            ))
        }
    };
    if args.k == 0 || n % args.k != 0 {
        return Err(Error::InvalidConfig(format!(
            "group size {} must divide the item count {}",
            args.k, n
        )));
    }
    let noise = match args.noise {
        NoiseArg::None => NoiseModel::None,
        NoiseArg::Uniform => NoiseModel::Uniform {
            bound: args.noise_bound,
        },
    };
    let spec = learn::LearnSpec {
        n,
        m: args.m.unwrap_or(n / args.k),
        k: args.k,
        delta: args.delta,
        rounds_per_edge: args.rounds_per_edge,
        delta_guess: args.delta_guess,
        noise,
        runs: args.runs,
        seed: resolve_seed(args.seed)?,
        scores: args.scores,
    };
    Ok((spec, args.out_dir))
}

/// Seed precedence: --seed flag, then the PARTILAB_SEED variable, then 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("PARTILAB_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::InvalidConfig(format!(
                "PARTILAB_SEED must be an unsigned integer, got {:?}",
                text
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(err) => Err(Error::InvalidConfig(format!(
            "PARTILAB_SEED is not readable: {}",
            err
        ))),
    }
}
