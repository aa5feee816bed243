use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cli::report::Format;
use cli::{cmds, crosscheck, CliError, DEFAULT_SEED};
use entanglement::DeficiencyMethod;
use moments::McMode;

/// Exact and Monte Carlo statistics of random graph states: output
/// moments, GF(2) rank laws, entanglement witnesses, and subgraph counts.
/// Every command is deterministic given its arguments and seed.
#[derive(Parser)]
#[command(name = "gslab", version)]
struct Args {
    /// Seed shared by every stochastic command
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output format; each command has a natural default
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (wall time only; results do not depend on it)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Transfer-matrix average over the angle distribution (exact per graph)
    Statmech,
    /// Direct state construction at sampled angles
    Statevector,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Scan all vertex subsets (n <= 22)
    Exhaustive,
    /// Random-restart hill climbing (certified lower bound)
    Heuristic,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one graph from an ensemble and print it as JSON
    Sample {
        /// pairing | matching | uniform-regular | er
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        /// Degree, for the regular models
        #[arg(long)]
        d: Option<usize>,
        /// Edge probability, for the er model
        #[arg(long)]
        p: Option<f64>,
        /// Index in the sample stream of this seed
        #[arg(long, default_value_t = 0)]
        index: u64,
    },
    /// Exact ensemble-averaged collision moment over a size range
    M2Exact {
        /// pairing | matching
        #[arg(long)]
        model: String,
        #[arg(long)]
        d: usize,
        /// Inclusive range, e.g. 4..64
        #[arg(long = "n-range")]
        n_range: String,
    },
    /// Monte Carlo ensemble-averaged collision moment
    M2Mc {
        /// pairing | matching | uniform-regular | er
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Statmech)]
        mode: ModeArg,
        /// Angle draws per graph (statevector mode)
        #[arg(long = "angle-samples", default_value_t = 1)]
        angle_samples: usize,
    },
    /// Collision moment of one stored graph by direct state construction
    M2Brute {
        /// Path to a graph JSON file
        #[arg(long)]
        host: PathBuf,
        /// Comma-separated angles, one per vertex; omit to average
        #[arg(long)]
        angles: Option<String>,
        /// Uniform angle draws when --angles is omitted
        #[arg(long = "angle-samples", default_value_t = 1000)]
        angle_samples: usize,
    },
    /// One exact binary Krawtchouk polynomial value
    Krawtchouk {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: usize,
    },
    /// Exact rank distribution of random symmetric GF(2) matrices
    RankDist {
        #[arg(long)]
        n: usize,
        /// Add an empirical column from this many sampled matrices
        #[arg(long)]
        mc: Option<usize>,
    },
    /// Sampled maximum principal-submatrix rank deficiency of an ensemble
    Deficiency {
        /// pairing | matching | uniform-regular | er
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Heuristic)]
        method: MethodArg,
        /// Hill-climbing restarts per sample (heuristic method)
        #[arg(long, default_value_t = 32)]
        budget: usize,
    },
    /// Rank-deficiency chain prediction vs direct matrix growth
    Markov {
        /// Number of growth steps
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Seed matrix rank (even)
        #[arg(long, default_value_t = 0)]
        r0: usize,
        /// Seed matrix size
        #[arg(long, default_value_t = 0)]
        m0: usize,
    },
    /// Exact induced-pattern count in a stored graph
    InducedCount {
        /// Path to a graph JSON file
        #[arg(long)]
        host: PathBuf,
        /// Pattern name (c4, k3, grid:3, ...) or graph JSON path
        #[arg(long)]
        pattern: String,
    },
    /// Monte Carlo induced-pattern count over uniform regular graphs
    InducedMc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Pattern name (c4, k3, ...) or graph JSON path
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Exact moment curves next to their large-n limits, for plotting
    Fig1 {
        /// Comma-separated degrees
        #[arg(long = "d-list", default_value = "3,4")]
        d_list: String,
        #[arg(long = "n-max", default_value_t = 64)]
        n_max: usize,
        /// pairing | matching | both
        #[arg(long, default_value = "both")]
        model: String,
    },
    /// Cross-validation suites; exits 1 if any check fails
    Crosscheck {
        /// moments | ranks | markov | subgraphs | all
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Measure a sparsified grid back down to the plain grid
    ReduceSparsegrid {
        /// Grid side length (2..=6)
        #[arg(long)]
        l: usize,
    },
}

fn run(args: Args) -> Result<i32, CliError> {
    if let Some(t) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("warning: could not resize thread pool: {e}");
        }
    }
    let seed = args.seed;
    let format = args.format.map(Format::from);
    let out = args.out.as_deref();
    let rendered = match args.command {
        Command::Sample {
            model,
            n,
            d,
            p,
            index,
        } => {
            let model = cmds::parse_model(&model, d, p)?;
            cmds::sample(model, n, index, seed, format)?
        }
        Command::M2Exact { model, d, n_range } => {
            cmds::m2_exact(&model, d, &n_range, seed, format)?
        }
        Command::M2Mc {
            model,
            n,
            d,
            p,
            samples,
            mode,
            angle_samples,
        } => {
            let model = cmds::parse_model(&model, d, p)?;
            let mode = match mode {
                ModeArg::Statmech => McMode::Statmech,
                ModeArg::Statevector => McMode::Statevector,
            };
            cmds::m2_mc(model, n, samples, mode, angle_samples, seed, format)?
        }
        Command::M2Brute {
            host,
            angles,
            angle_samples,
        } => cmds::m2_brute(&host, angles.as_deref(), angle_samples, seed, format)?,
        Command::Krawtchouk { i, n, x } => cmds::krawtchouk_value(i, n, x, seed, format)?,
        Command::RankDist { n, mc } => cmds::rank_dist(n, mc, seed, format)?,
        Command::Deficiency {
            model,
            n,
            d,
            p,
            samples,
            method,
            budget,
        } => {
            let model = cmds::parse_model(&model, d, p)?;
            let method = match method {
                MethodArg::Exhaustive => DeficiencyMethod::Exhaustive,
                MethodArg::Heuristic => DeficiencyMethod::Heuristic,
            };
            cmds::deficiency(model, n, samples, method, budget, seed, format)?
        }
        Command::Markov { k, samples, r0, m0 } => cmds::markov(k, samples, r0, m0, seed, format)?,
        Command::InducedCount { host, pattern } => {
            cmds::induced_count(&host, &pattern, seed, format)?
        }
        Command::InducedMc {
            n,
            d,
            pattern,
            samples,
        } => cmds::induced_mc(n, d, &pattern, samples, seed, format)?,
        Command::Fig1 {
            d_list,
            n_max,
            model,
        } => cmds::fig1(&d_list, n_max, &model, seed, format)?,
        Command::Crosscheck { suite, samples } => {
            let (rendered, failures) = crosscheck::run(&suite, samples, seed, format)?;
            rendered.emit(out)?;
            return Ok(if failures > 0 { 1 } else { 0 });
        }
        Command::ReduceSparsegrid { l } => cmds::reduce_sparsegrid(l, seed, format)?,
    };
    rendered.emit(out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
