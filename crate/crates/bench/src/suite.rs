//! Instance × seed × algorithm jobs, run in a worker pool and written as
//! CSV rows in job order.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use kttt_core::coloring::{color_kttt_free, color_part, PartColorerChoice};
use kttt_core::gen::GenSpec;
use kttt_core::graph::{greedy_independent_set, is_independent};
use kttt_core::nibble::{check_cleaning_inequalities, reference_bounds, run_nibble, NibbleParams};
use kttt_core::partition::default_params;
use kttt_core::rng::{stream, Tag};
use kttt_core::Graph;
use rayon::prelude::*;
use serde::Serialize;

use crate::io::{create, read_graph, write_integers, BenchError, Result};

/// First line of every CSV file written by [`run_suite`].
pub const CSV_SCHEMA: &str = "# kttt-bench runs v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Spec(GenSpec),
    File(PathBuf),
}

impl Instance {
    fn family(&self) -> String {
        match self {
            Instance::Spec(s) => s.family_name().to_string(),
            Instance::File(_) => "file".to_string(),
        }
    }

    fn label(&self) -> String {
        match self {
            Instance::Spec(s) => s.to_string(),
            Instance::File(p) => p.display().to_string(),
        }
    }

    /// The graph for a run seed. Files ignore the seed.
    pub fn load(&self, seed: u64) -> Result<Graph> {
        match self {
            Instance::Spec(s) => Ok(s.generate(seed)?),
            Instance::File(p) => read_graph(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Greedy,
    Nibble,
    Color(PartColorerChoice),
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Greedy => f.write_str("greedy"),
            Algorithm::Nibble => f.write_str("nibble"),
            Algorithm::Color(c) => write!(f, "color:{c}"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Algorithm::Greedy),
            "nibble" => Ok(Algorithm::Nibble),
            "color" => Ok(Algorithm::Color(PartColorerChoice::GreedyDegeneracy)),
            _ => match s.strip_prefix("color:") {
                Some(c) => Ok(Algorithm::Color(c.parse()?)),
                None => Err(BenchError::Config(format!(
                    "unknown algorithm {s:?} (greedy, nibble, color[:strategy])"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub instances: Vec<Instance>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub nibble: NibbleParams,
    /// `t` for the coloring pipeline's partition parameters.
    pub t: u64,
    pub csv: Option<PathBuf>,
    /// Independent sets and colorings, one file per row.
    pub artifact_dir: Option<PathBuf>,
    /// JSON-lines nibble traces, one file per nibble row.
    pub trace_dir: Option<PathBuf>,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
}

impl RunConfig {
    pub fn new(instances: Vec<Instance>, seeds: Vec<u64>, algorithms: Vec<Algorithm>) -> Self {
        RunConfig {
            instances,
            seeds,
            algorithms,
            nibble: NibbleParams::new(0.25, 1),
            t: 1,
            csv: None,
            artifact_dir: None,
            trace_dir: None,
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.instances.is_empty() || self.seeds.is_empty() || self.algorithms.is_empty() {
            return Err(BenchError::Config("need at least one instance, seed and algorithm".into()));
        }
        if self.t == 0 {
            return Err(BenchError::Config("t must be positive".into()));
        }
        self.nibble.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub instance: String,
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub d: f64,
    pub max_degree: u32,
    pub algorithm: String,
    pub seed: u64,
    /// Independent-set size, or palette size for colorings.
    pub size: usize,
    /// Greedy independent-set size, or greedy palette size for colorings.
    pub greedy_baseline: usize,
    pub shearer_target: f64,
    pub cleaning_steps: usize,
    pub nibble_steps: usize,
    pub stop: String,
    /// Cleaning steps violating the ratio inequalities (nibble rows).
    pub cleaning_violations: usize,
    pub wall_ms: f64,
    pub verified: bool,
}

impl RunReport {
    /// The CSV row without the wall-time column.
    pub fn replay_key(&self) -> String {
        let mut r = self.clone();
        r.wall_ms = 0.0;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.serialize(&r).expect("in-memory csv");
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }
}

struct Job<'a> {
    index: usize,
    instance: &'a Instance,
    seed: u64,
    algorithm: Algorithm,
}

fn run_job(job: &Job<'_>, g: &Graph, config: &RunConfig) -> Result<RunReport> {
    let stats = g.degrees();
    let d = stats.avg();
    let mut report = RunReport {
        instance: format!("i{}:{}", job.index, job.instance.label()),
        family: job.instance.family(),
        n: g.n(),
        m: g.m(),
        d,
        max_degree: stats.max,
        algorithm: job.algorithm.to_string(),
        seed: job.seed,
        size: 0,
        greedy_baseline: 0,
        shearer_target: reference_bounds(g.n(), d, config.nibble.eps).shearer_target,
        cleaning_steps: 0,
        nibble_steps: 0,
        stop: String::new(),
        cleaning_violations: 0,
        wall_ms: 0.0,
        verified: false,
    };
    let artifact = config
        .artifact_dir
        .as_ref()
        .map(|dir| artifact_path(dir, job.index, job.algorithm, job.seed, "txt"));
    match job.algorithm {
        Algorithm::Greedy => {
            let start = Instant::now();
            let s = greedy_independent_set(g);
            report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            report.size = s.len();
            report.greedy_baseline = s.len();
            report.verified = is_independent(g, &s);
            if let Some(p) = artifact {
                write_integers(&p, s.iter().map(u64::from))?;
            }
        }
        Algorithm::Nibble => {
            let start = Instant::now();
            let out = run_nibble(g, &config.nibble, &mut stream(job.seed, Tag::Nibble, 0))?;
            report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let summary = out.trace.summary();
            let cleaning = check_cleaning_inequalities(&out.trace);
            report.size = out.iset.len();
            report.greedy_baseline = greedy_independent_set(g).len();
            report.cleaning_steps = summary.cleaning_steps;
            report.nibble_steps = summary.nibble_steps;
            report.stop = summary.stop.map(|s| s.to_string()).unwrap_or_default();
            report.cleaning_violations = cleaning.violations.len();
            report.verified = is_independent(g, &out.iset) && out.trace.check_monotone().is_ok();
            for r in &out.trace.records {
                log::trace!("{} seed {}: {:?}", report.instance, job.seed, r);
            }
            if let Some(p) = artifact {
                write_integers(&p, out.iset.iter().map(u64::from))?;
            }
            if let Some(dir) = &config.trace_dir {
                let path = artifact_path(dir, job.index, job.algorithm, job.seed, "jsonl");
                let mut w = create(&path)?;
                out.trace
                    .write_json_lines(&mut w)
                    .and_then(|_| w.flush())
                    .map_err(|source| BenchError::Io { path, source })?;
            }
        }
        Algorithm::Color(choice) => {
            let params = default_params(stats.max.max(1) as u64, config.t);
            let start = Instant::now();
            let out = color_kttt_free(g, &params, choice, &mut stream(job.seed, Tag::Partition, 0))?;
            report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            report.size = out.coloring.palette_size;
            report.greedy_baseline =
                color_part(g, PartColorerChoice::GreedyDegeneracy, &mut stream(job.seed, Tag::ColorPart, 0)).palette_size;
            report.verified = kttt_core::coloring::verify_coloring(g, &out.coloring)?.passed
                && out.coloring.palette_size as u64 <= out.palette_bound
                && out.partition.certificates.iter().all(|c| c.triangle_count == 0);
            if let Some(p) = artifact {
                write_integers(&p, out.coloring.color_of.iter().map(|&c| c as u64))?;
            }
        }
    }
    log::info!(
        "{} {} seed {}: size {} verified {}",
        report.instance,
        report.algorithm,
        job.seed,
        report.size,
        report.verified
    );
    Ok(report)
}

fn run_jobs(config: &RunConfig) -> Result<Vec<RunReport>> {
    let mut graphs = Vec::new();
    for (index, instance) in config.instances.iter().enumerate() {
        for &seed in &config.seeds {
            graphs.push((index, instance, seed));
        }
    }
    let loaded: Vec<Graph> = graphs.par_iter().map(|&(_, inst, seed)| inst.load(seed)).collect::<Result<_>>()?;
    let jobs: Vec<(Job<'_>, &Graph)> = graphs
        .iter()
        .zip(&loaded)
        .flat_map(|(&(index, instance, seed), g)| {
            config.algorithms.iter().map(move |&algorithm| {
                (
                    Job {
                        index,
                        instance,
                        seed,
                        algorithm,
                    },
                    g,
                )
            })
        })
        .collect();
    jobs.par_iter().map(|(job, g)| run_job(job, g, config)).collect()
}

pub fn write_csv<W: Write>(w: W, reports: &[RunReport]) -> Result<()> {
    let mut w = w;
    writeln!(w, "{CSV_SCHEMA}").map_err(csv::Error::from)?;
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        out.serialize(r)?;
        out.flush().map_err(csv::Error::from)?;
    }
    Ok(())
}

/// Runs every (instance, seed, algorithm) job and writes the CSV, if
/// configured. Rows come back, and are written, in job order regardless of
/// the thread count.
pub fn run_suite(config: &RunConfig) -> Result<Vec<RunReport>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| BenchError::Config(format!("thread pool: {e}")))?;
    let reports = pool.install(|| run_jobs(config))?;
    if let Some(path) = &config.csv {
        write_csv(create(path)?, &reports).map_err(|e| match e {
            BenchError::Csv(e) => BenchError::Config(format!("{}: {e}", path.display())),
            e => e,
        })?;
    }
    Ok(reports)
}

pub fn all_verified(reports: &[RunReport]) -> bool {
    reports.iter().all(|r| r.verified)
}

/// Seeds from `"1,2,7"` or `"1..5"` (inclusive) or a mix.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = || BenchError::Config(format!("bad seed list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// File for the output of one row, e.g. `i0_nibble_s3.txt`.
pub fn artifact_path(dir: &Path, index: usize, algorithm: Algorithm, seed: u64, ext: &str) -> PathBuf {
    let alg = algorithm.to_string().replace(':', "-");
    dir.join(format!("i{index}_{alg}_s{seed}.{ext}"))
}
