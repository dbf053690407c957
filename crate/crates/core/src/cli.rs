//! Command-line front end.
//!
//! Every command prints one record on standard output; diagnostics go to
//! standard error through `log`.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::exact::{choose_side, exact_count, exact_count_side};
use crate::graph::{
    complete_biclique, load_edge_list, random_bipartite, BipartiteGraph, ParseOptions, Side, VertexRef,
};
use crate::local::{count_per_edge, count_per_vertex};
use crate::oracle::{classify_pairs_with, variance_bounds, OracleGuards};
use crate::report::{emit, PairsRecord, RunReport, StatsRecord};
use crate::sampling::{run_estimator, Budget, EstimatorConfig, Method, DEFAULT_FAST_EDGE_REPEATS};
use crate::sparsify::{sparsify_run, SparsifyConfig, SparsifyMethod};

/// Exit status for a count that does not fit in 64 bits.
pub const EXIT_OVERFLOW: i32 = 3;
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "butterfly", version, about = "Exact and approximate butterfly counting in bipartite graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print aligned rows instead of a JSON line.
    #[arg(long, global = true)]
    pub human: bool,
    /// Record estimate checkpoints at 1, 2, 4, ... iterations.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Compute the exact count to report relative error.
    #[arg(long, global = true)]
    pub exact_for_error: bool,
    /// Omit wall-clock fields from the output.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sizes, degree-square sums, wedges and maximum degree.
    Stats { input: PathBuf },
    /// Exact global butterfly count.
    Exact {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Auto)]
        side: SideArg,
    },
    /// Sampling estimate of the global count.
    Sample(SampleArgs),
    /// One-shot sparsification estimate of the global count.
    Sparsify(SparsifyArgs),
    /// Write a generated graph as an edge list.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        /// Output file (default: standard output).
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// Butterflies through one vertex or one edge.
    Local(LocalArgs),
    /// Butterfly pair types and variance bounds (small graphs only).
    Pairs {
        input: PathBuf,
        /// Retention probability for the sparsifier bounds (1/N for colors).
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 64)]
        max_side: usize,
        #[arg(long, default_value_t = 2000)]
        max_butterflies: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Auto,
    Left,
    Right,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    pub input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(Method))]
    pub method: Method,
    #[arg(long, default_value_t = 1000, conflicts_with = "time_budget")]
    pub iterations: u64,
    /// Run for this many seconds instead of a fixed iteration count.
    #[arg(long)]
    pub time_budget: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_FAST_EDGE_REPEATS)]
    pub fast_repeats: u32,
    /// Odd number of groups for a median of means.
    #[arg(long, default_value_t = 1)]
    pub groups: u32,
    /// Iterations per group (default: --iterations).
    #[arg(long)]
    pub group_size: Option<u64>,
    /// Known exact count for the relative error.
    #[arg(long)]
    pub exact: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SparsifyArgs {
    pub input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(SparsifyMethod))]
    pub method: SparsifyMethod,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 2)]
    pub colors: u32,
    #[arg(long, default_value_t = 1)]
    pub trials: u32,
    /// Pilot butterfly count used to check the retention probability.
    #[arg(long)]
    pub pilot: Option<f64>,
    #[arg(long)]
    pub exact: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Complete bipartite graph K_{a,b}.
    Biclique { a: usize, b: usize },
    /// Each of the a·b possible edges kept independently with probability p.
    Random { a: usize, b: usize, p: f64 },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct LocalSubject {
    /// Vertex as side:index, e.g. left:0.
    #[arg(long, value_parser = clap::value_parser!(VertexRef))]
    pub vertex: Option<VertexRef>,
    /// Edge as a left index and a right index.
    #[arg(long, num_args = 2, value_names = ["LEFT", "RIGHT"])]
    pub edge: Option<Vec<u32>>,
}

#[derive(Debug, Args)]
pub struct LocalArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub subject: LocalSubject,
}

/// Maps an error to the process exit status.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Overflow => EXIT_OVERFLOW,
        _ => EXIT_FAILURE,
    }
}

/// Reads an edge list from a path, or from standard input for `-`.
pub fn read_graph(path: &Path) -> Result<BipartiteGraph> {
    let options = ParseOptions::default();
    if path.as_os_str() == "-" {
        load_edge_list(io::stdin().lock(), &options)
    } else {
        load_edge_list(BufReader::new(File::open(path)?), &options)
    }
}

/// Runs the parsed command, using a thread pool sized by `--threads`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(Error::invalid("threads must be >= 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let mut buf = Vec::new();
    pool.install(|| dispatch(cli, &mut buf))?;
    out.write_all(&buf)?;
    Ok(())
}

fn finish(g: &GlobalArgs, report: RunReport, out: &mut dyn Write) -> Result<()> {
    let report = if g.no_timing { report.without_timing() } else { report };
    emit(out, &report, g.human)
}

fn reference_count(g: &GlobalArgs, graph: &BipartiteGraph, given: Option<f64>) -> Result<Option<f64>> {
    match given {
        Some(x) => Ok(Some(x)),
        None if g.exact_for_error => Ok(Some(exact_count(graph)? as f64)),
        None => Ok(None),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Stats { input } => {
            let graph = read_graph(input)?;
            emit(out, &StatsRecord::from(graph.stats()), g.human)
        }
        Command::Exact { input, side } => {
            let graph = read_graph(input)?;
            let choice = choose_side(&graph);
            let start = Instant::now();
            let chosen = match side {
                SideArg::Auto => choice.chosen,
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let count = exact_count_side(&graph, chosen)?;
            let mut r = RunReport::new("exact", "exact", count as f64, g.seed)
                .param("side", chosen)
                .param("requested_side", format!("{side:?}").to_lowercase())
                .param("cost_left", choice.cost_left)
                .param("cost_right", choice.cost_right)
                .with_exact(Some(count as f64));
            r.count = Some(count);
            r.elapsed_seconds = Some(start.elapsed().as_secs_f64());
            finish(g, r, out)
        }
        Command::Sample(a) => {
            let graph = read_graph(&a.input)?;
            let mut cfg = EstimatorConfig::new(a.method, a.iterations, g.seed);
            if let Some(s) = a.time_budget {
                cfg.budget = Budget::TimeBudget(s);
            }
            cfg.fast_edge_repeats = a.fast_repeats;
            cfg.groups = a.groups;
            cfg.group_size = a.group_size;
            cfg.trace = g.trace;
            let est = run_estimator(&graph, &cfg)?;
            let mut r = RunReport::from_estimate("sample", a.method.to_string(), &est)
                .param("groups", a.groups);
            r = match a.time_budget {
                Some(s) => r.param("time_budget", s),
                None => r
                    .param("iterations", a.iterations)
                    .param("group_size", a.group_size.unwrap_or(a.iterations)),
            };
            if a.method == Method::FastEdge {
                r = r.param("fast_repeats", a.fast_repeats);
            }
            let exact = reference_count(g, &graph, a.exact)?;
            finish(g, r.with_exact(exact), out)
        }
        Command::Sparsify(a) => {
            let graph = read_graph(&a.input)?;
            let mut cfg = match a.method {
                SparsifyMethod::EdgeSpar => SparsifyConfig::edge(a.p, g.seed),
                SparsifyMethod::ColorSpar => SparsifyConfig::color(a.colors, g.seed),
            };
            cfg.trials = a.trials;
            cfg.pilot_bfly = a.pilot;
            let est = sparsify_run(&graph, &cfg)?;
            let mut r = RunReport::from_estimate("sparsify", a.method.to_string(), &est).param("trials", a.trials);
            r = match a.method {
                SparsifyMethod::EdgeSpar => r.param("p", a.p),
                SparsifyMethod::ColorSpar => r.param("colors", a.colors),
            };
            let exact = reference_count(g, &graph, a.exact)?;
            finish(g, r.with_exact(exact), out)
        }
        Command::Generate { kind, out: path } => {
            let graph = match *kind {
                GenerateKind::Biclique { a, b } => complete_biclique(a, b)?,
                GenerateKind::Random { a, b, p } => random_bipartite(a, b, p, g.seed)?,
            };
            match path {
                Some(p) => {
                    let mut w = BufWriter::new(File::create(p)?);
                    graph.write_edge_list(&mut w)?;
                    w.flush()?;
                    log::info!("wrote {} edges to {}", graph.edge_count(), p.display());
                    Ok(())
                }
                None => graph.write_edge_list(out),
            }
        }
        Command::Local(a) => {
            let graph = read_graph(&a.input)?;
            let (method, count, subject) = match (&a.subject.vertex, &a.subject.edge) {
                (Some(v), _) => ("vertex", count_per_vertex(&graph, *v)?, v.to_string()),
                (None, Some(e)) => (
                    "edge",
                    count_per_edge(&graph, VertexRef::left(e[0]), VertexRef::right(e[1]))?,
                    format!("{} {}", e[0], e[1]),
                ),
                (None, None) => return Err(Error::invalid("give --vertex or --edge")),
            };
            let mut r = RunReport::new("local", method, count as f64, g.seed).param("subject", subject);
            r.count = Some(count);
            finish(g, r, out)
        }
        Command::Pairs {
            input,
            p,
            max_side,
            max_butterflies,
        } => {
            let graph = read_graph(input)?;
            let guards = OracleGuards {
                max_side: *max_side,
                max_butterflies: *max_butterflies,
            };
            let counts = classify_pairs_with(&graph, &guards).map_err(|e| match e {
                Error::SizeGuard { what, actual, limit } => Error::invalid(format!(
                    "{what} = {actual} exceeds oracle guard {limit}; raise it with --max-side / --max-butterflies"
                )),
                other => other,
            })?;
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(Error::invalid(format!("p = {p} not in (0, 1]")));
            }
            let bounds = variance_bounds(&graph, &counts, Some(*p));
            emit(out, &PairsRecord::new(&counts, *p, bounds), g.human)
        }
    }
}
