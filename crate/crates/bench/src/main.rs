use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use kttt_bench::io::{create, read_graph, write_graph, write_integers};
use kttt_bench::suite::{all_verified, parse_seeds, run_suite, Algorithm, Instance, RunConfig};
use kttt_bench::verify::{verify_artifacts, Artifact};
use kttt_core::coloring::{color_kttt_free, PartColorerChoice};
use kttt_core::gen::GenSpec;
use kttt_core::graph::is_independent;
use kttt_core::nibble::{check_cleaning_inequalities, run_nibble, NibbleParams};
use kttt_core::partition::{cleanup_to_triangle_free, default_params, moser_tardos_partition, verify_partition, PartitionParams};
use kttt_core::rng::{stream, Tag};
use kttt_core::turan::{left_sparse_ordering, verify_left_sparsity};
use kttt_core::Graph;

/// Independent sets, triangle-free partitions and colorings of K_{t,t,t}-free graphs.
///
/// Graph files hold a header line `n m` followed by `m` lines `u v`.
/// Log level is read from NIBBLE_LOG (e.g. NIBBLE_LOG=info).
#[derive(Parser)]
#[command(name = "kttt", version)]
struct Cli {
    /// Run seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Main output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from a compact spec.
    ///
    /// Specs are `family:key=value,...`:
    ///   gnp:n=N,p=P | gnp:n=N,d=D          (p = d/n)
    ///   scrubbed:n=N,p=P | scrubbed:n=N,d=D (G(n,p), then one edge of each triangle removed)
    ///   regular:n=N,d=D                    (uniform d-regular)
    ///   bipartite:a=A,b=B,p=P | ...,d=D
    ///   blowup_k3:s=S[,copies=C]           (K3 with every vertex replaced by S independent copies)
    ///   blowup_c5:s=S[,copies=C]
    /// Any family takes `seed=X` to override --seed.
    #[command(verbatim_doc_comment)]
    Gen {
        #[arg(long)]
        spec: String,
    },
    /// Left-sparse vertex ordering, one vertex per line from left to right.
    Order(GraphArg),
    /// Partition into triangle-free parts; writes one class id per vertex.
    Partition {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[command(flatten)]
        overrides: PartitionOverrides,
    },
    /// Cleaning/nibble independent set.
    Nibble {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// Largest activated set solved exactly.
        #[arg(long, default_value_t = kttt_core::graph::DEFAULT_MIS_NODE_CAP)]
        mis_cap: usize,
        /// Return only the nibble-step sets, without the greedy finish on the residual graph.
        #[arg(long)]
        no_finish: bool,
        /// JSON-lines trace, one record per iteration.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Vertex ids of the final set, one per line.
        #[arg(long)]
        iset_out: Option<PathBuf>,
    },
    /// Proper coloring through the triangle-free partition; writes one color per vertex.
    Color {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 1)]
        t: u64,
        /// greedy_degeneracy, dsatur or randomized_local.
        #[arg(long, default_value = "greedy_degeneracy")]
        strategy: String,
    },
    /// Check an output file against a graph. Exits nonzero on failure.
    Verify {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, conflicts_with_all = ["coloring", "partition"])]
        iset: Option<PathBuf>,
        #[arg(long, conflicts_with = "partition")]
        coloring: Option<PathBuf>,
        #[arg(long, requires = "degree_bound")]
        partition: Option<PathBuf>,
        /// Allowed maximum degree inside a partition class.
        #[arg(long)]
        degree_bound: Option<u64>,
    },
    /// Run instances × seeds × algorithms and write one CSV row per run.
    /// Exits nonzero if any run fails verification.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GraphArg {
    /// Graph file.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct PartitionOverrides {
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long)]
    kappa_bad: Option<u64>,
    #[arg(long)]
    mu: Option<u64>,
    #[arg(long)]
    bad_threshold: Option<u64>,
    #[arg(long)]
    part_degree_bound: Option<u64>,
    #[arg(long)]
    max_resamples: Option<u64>,
}

impl PartitionOverrides {
    fn apply(&self, mut p: PartitionParams) -> PartitionParams {
        p.ell = self.ell.unwrap_or(p.ell);
        p.kappa_bad = self.kappa_bad.unwrap_or(p.kappa_bad);
        p.mu = self.mu.unwrap_or(p.mu);
        p.bad_threshold = self.bad_threshold.unwrap_or(p.bad_threshold);
        p.part_degree_bound = self.part_degree_bound.unwrap_or(p.part_degree_bound);
        p.max_resamples = self.max_resamples.unwrap_or(p.max_resamples);
        p
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Generated instance (repeatable).
    #[arg(long = "spec")]
    specs: Vec<String>,
    /// Instance file (repeatable).
    #[arg(long = "graph")]
    graphs: Vec<PathBuf>,
    /// Seed list such as `1..5` or `1,4,9`.
    #[arg(long, default_value = "1")]
    seeds: String,
    /// Comma-separated: greedy, nibble, color[:strategy].
    #[arg(long, default_value = "greedy,nibble")]
    algorithms: String,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    t: u32,
    #[arg(long, default_value_t = kttt_core::graph::DEFAULT_MIS_NODE_CAP)]
    mis_cap: usize,
    #[arg(long)]
    no_finish: bool,
    /// Directory for per-run independent sets and colorings.
    #[arg(long)]
    artifact_dir: Option<PathBuf>,
    /// Directory for per-run nibble traces.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_lines<I: IntoIterator<Item = u64>>(path: Option<&Path>, values: I) -> Result<()> {
    match path {
        Some(p) => write_integers(p, values)?,
        None => {
            let mut w = io::stdout().lock();
            for x in values {
                writeln!(w, "{x}")?;
            }
        }
    }
    Ok(())
}

fn partition_params(g: &Graph, t: u64) -> PartitionParams {
    default_params(g.max_degree().max(1) as u64, t)
}

fn run(cli: Cli) -> Result<bool> {
    let seed = cli.seed;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Gen { spec } => {
            let spec: GenSpec = spec.parse()?;
            let g = spec.generate(seed)?;
            match out {
                Some(p) => write_graph(p, &g)?,
                None => g.write_edge_list(io::stdout().lock())?,
            }
            eprintln!("generated {spec}: n={} m={}", g.n(), g.m());
            Ok(true)
        }
        Command::Order(arg) => {
            let g = read_graph(&arg.graph)?;
            let o = left_sparse_ordering(&g);
            let max = o.left_tri.iter().copied().max().unwrap_or(0);
            let report = verify_left_sparsity(&g, &o, max)?;
            let steps_ok = o.steps.iter().all(|s| s.satisfies_averaging_bound());
            write_lines(out, o.order.iter().map(|&v| v as u64))?;
            eprintln!(
                "max_left_triangles={max} triangles={} attribution={} averaging_bound={}",
                report.triangle_count,
                report.attribution_identity_holds(),
                steps_ok
            );
            Ok(report.passed && steps_ok)
        }
        Command::Partition { graph, t, overrides } => {
            let g = read_graph(&graph.graph)?;
            let params = overrides.apply(partition_params(&g, t));
            let o = left_sparse_ordering(&g);
            let mt = moser_tardos_partition(&g, &o, &params, &mut stream(seed, Tag::Partition, 0))?;
            let cleanup = cleanup_to_triangle_free(&g, &o, &mt.coloring, &params)?;
            let report = verify_partition(&g, &cleanup.partition, params.part_degree_bound)?;
            write_lines(out, cleanup.partition.class_of.iter().map(|&c| c as u64))?;
            eprintln!(
                "k={} resamples={} max_part_degree={} degree_bound={} max_kill_set={} verdict={}",
                report.k,
                mt.resamples,
                report.max_part_degree,
                params.part_degree_bound,
                cleanup.max_kill_set,
                if report.passed { "PASS" } else { "FAIL" }
            );
            Ok(report.passed)
        }
        Command::Nibble {
            graph,
            eps,
            t,
            mis_cap,
            no_finish,
            trace_out,
            iset_out,
        } => {
            let g = read_graph(&graph.graph)?;
            let mut params = NibbleParams::new(eps, t);
            params.mis_node_cap = mis_cap;
            params.finish_with_greedy = !no_finish;
            let result = run_nibble(&g, &params, &mut stream(seed, Tag::Nibble, 0))?;
            if let Some(p) = &trace_out {
                let mut w = create(p)?;
                result.trace.write_json_lines(&mut w).with_context(|| p.display().to_string())?;
                w.flush()?;
            }
            if let Some(p) = &iset_out {
                write_integers(p, result.iset.iter().map(u64::from))?;
            }
            let summary = result.trace.summary();
            let cleaning = check_cleaning_inequalities(&result.trace);
            let ok = is_independent(&g, &result.iset) && cleaning.passed();
            let mut w = output(out)?;
            writeln!(
                w,
                "iset={} nibble_part={} residual_n={} cleaning_steps={} nibble_steps={} stop={} greedy_bound={:.1} shearer_target={:.1} cleaning_violations={} verdict={}",
                result.iset.len(),
                result.nibble_iset.len(),
                result.residual.graph.n(),
                summary.cleaning_steps,
                summary.nibble_steps,
                result.stop,
                result.bounds.greedy,
                result.bounds.shearer_target,
                cleaning.violations.len(),
                if ok { "PASS" } else { "FAIL" }
            )?;
            Ok(ok)
        }
        Command::Color { graph, t, strategy } => {
            let g = read_graph(&graph.graph)?;
            let choice: PartColorerChoice = strategy.parse()?;
            let result = color_kttt_free(&g, &partition_params(&g, t), choice, &mut stream(seed, Tag::Partition, 0))?;
            write_lines(out, result.coloring.color_of.iter().map(|&c| c as u64))?;
            eprintln!(
                "palette={} k={} max_part_degree={} palette_bound={} resamples={} verdict=PASS",
                result.coloring.palette_size, result.partition.k, result.max_part_degree, result.palette_bound, result.resamples
            );
            Ok(true)
        }
        Command::Verify {
            graph,
            iset,
            coloring,
            partition,
            degree_bound,
        } => {
            let artifact = match (iset, coloring, partition) {
                (Some(p), _, _) => Artifact::Iset(p),
                (_, Some(p), _) => Artifact::Coloring(p),
                (_, _, Some(path)) => Artifact::Partition {
                    path,
                    degree_bound: degree_bound.unwrap_or(u64::MAX),
                },
                _ => bail!("one of --iset, --coloring or --partition is required"),
            };
            let verdict = verify_artifacts(&graph.graph, &artifact)?;
            writeln!(output(out)?, "{verdict}")?;
            Ok(verdict.passed)
        }
        Command::Bench(args) => {
            let mut instances: Vec<Instance> = Vec::new();
            for s in &args.specs {
                instances.push(Instance::Spec(s.parse().with_context(|| format!("spec {s:?}"))?));
            }
            instances.extend(args.graphs.into_iter().map(Instance::File));
            let algorithms = args
                .algorithms
                .split(',')
                .map(|a| a.trim().parse())
                .collect::<Result<Vec<Algorithm>, _>>()?;
            let mut config = RunConfig::new(instances, parse_seeds(&args.seeds)?, algorithms);
            config.nibble = NibbleParams::new(args.eps, args.t);
            config.nibble.mis_node_cap = args.mis_cap;
            config.nibble.finish_with_greedy = !args.no_finish;
            config.t = args.t as u64;
            config.threads = cli.threads;
            config.artifact_dir = args.artifact_dir;
            config.trace_dir = args.trace_dir;
            config.csv = cli.out;
            let reports = run_suite(&config)?;
            if config.csv.is_none() {
                kttt_bench::suite::write_csv(io::stdout().lock(), &reports)?;
            }
            let failed = reports.iter().filter(|r| !r.verified).count();
            eprintln!("{} runs, {failed} failed verification", reports.len());
            Ok(all_verified(&reports))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("NIBBLE_LOG")).init();
    let cli = Cli::parse();
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
