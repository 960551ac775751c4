//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Every check recomputes its reference value with code local to this file
//! (adjacency matrices, subset scans, exhaustive enumeration) rather than
//! through the library path under test.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use kttt_bench::suite::{run_suite, Algorithm, Instance, RunConfig, RunReport};
use kttt_core::coloring::{color_kttt_free, verify_coloring, PartColorerChoice};
use kttt_core::gen::{self, blowup, classic, GenSpec};
use kttt_core::graph::{exact_mis, is_independent, triangle_count, Graph};
use kttt_core::nibble::{check_cleaning_inequalities, expected_residual_edges, expected_survivors, iset_step, run_nibble, NibbleParams};
use kttt_core::partition::{cleanup_to_triangle_free, default_params, moser_tardos_partition, PartitionParams};
use kttt_core::rng::{stream, Tag};
use kttt_core::turan::{left_sparse_ordering, VertexOrdering};

#[derive(Default)]
struct Outcome {
    passed: bool,
    detail: String,
    /// Time spent on shared work done before the check itself.
    shared: Duration,
}

fn criterion(id: u32, name: &str, limit: Option<Duration>, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed() + out.shared;
    let in_time = limit.is_none_or(|l| elapsed < l);
    let passed = out.passed && in_time;
    let budget = limit.map(|l| format!(" < {}s", l.as_secs())).unwrap_or_default();
    println!(
        "[{}] criterion {id} {name}: {} ({:.1}s{budget}{})",
        if passed { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        if in_time { "" } else { ", over time" }
    );
    passed
}

fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; g.n()]; g.n()];
    for (u, v) in g.edges() {
        a[u as usize][v as usize] = true;
        a[v as usize][u as usize] = true;
    }
    a
}

fn neighbor_sets(g: &Graph) -> Vec<HashSet<u32>> {
    g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect()
}

// 1

fn triangles_oracle() -> Outcome {
    let mut mismatches = 0;
    for k in 0..100u64 {
        let n = 5 + (k % 36) as usize;
        let g = gen::gnp(n, 0.05 + 0.08 * (k % 10) as f64, 1000 + k).unwrap();
        let a = matrix(&g);
        let mut brute = 0u64;
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    brute += (a[x][y] && a[y][z] && a[x][z]) as u64;
                }
            }
        }
        mismatches += (brute != triangle_count(&g)) as usize;
    }
    Outcome {
        passed: mismatches == 0,
        detail: format!("100 graphs, {mismatches} mismatches"),
        ..Default::default()
    }
}

// 2

fn mis_oracle() -> Outcome {
    let mut mismatches = 0;
    for k in 0..50u64 {
        let n = 6 + (k % 13) as usize;
        let g = gen::gnp(n, 0.1 + 0.1 * (k % 7) as f64, 2000 + k).unwrap();
        let a = matrix(&g);
        let masks: Vec<u32> = (0..n).map(|v| (0..n).filter(|&u| a[v][u]).fold(0, |m, u| m | 1 << u)).collect();
        let alpha = (0u32..1 << n)
            .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || masks[v] & s == 0))
            .map(u32::count_ones)
            .max()
            .unwrap() as usize;
        let got = exact_mis(&g, 40).unwrap();
        mismatches += (got.len() != alpha || !is_independent(&g, &got)) as usize;
    }
    Outcome {
        passed: mismatches == 0,
        detail: format!("50 graphs, {mismatches} mismatches"),
        ..Default::default()
    }
}

// 3

fn ordering_corpus() -> Vec<Graph> {
    let mut out = Vec::new();
    for (k, &(n, d)) in [(200, 6.0), (300, 20.0), (500, 12.0), (1000, 30.0), (2000, 16.0), (2000, 40.0)]
        .iter()
        .cycle()
        .take(30)
        .enumerate()
    {
        out.push(gen::gnp(n, d / n as f64, 3000 + k as u64).unwrap());
    }
    for s in 1..=5 {
        out.push(blowup(&classic::complete(3), s));
        out.push(classic::disjoint_union(&blowup(&classic::complete(3), s), 20));
        out.push(blowup(&classic::cycle(5), s));
    }
    out.push(classic::complete(40));
    out.push(classic::disjoint_union(&classic::complete(12), 30));
    out.push(gen::random_regular(1000, 8, 3).unwrap());
    out.push(gen::triangle_scrubbed_gnp(1500, 0.01, 3).unwrap());
    out.push(gen::random_bipartite(300, 400, 0.05, 3).unwrap());
    assert_eq!(out.len(), 50);
    out
}

/// Left-triangle counts from an explicit triangle listing.
fn left_tri_listing(g: &Graph, o: &VertexOrdering) -> Vec<u64> {
    let sets = neighbor_sets(g);
    let mut out = vec![0u64; g.n()];
    for u in g.vertices() {
        let nb = g.neighbors(u);
        for (i, &v) in nb.iter().enumerate().filter(|&(_, &v)| v > u) {
            for &w in nb[i + 1..].iter() {
                if sets[v as usize].contains(&w) {
                    let last = [u, v, w].into_iter().max_by_key(|&x| o.position[x as usize]).unwrap();
                    out[last as usize] += 1;
                }
            }
        }
    }
    out
}

fn ordering_certificate() -> Outcome {
    let corpus = ordering_corpus();
    let mut violations = 0usize;
    let mut steps = 0usize;
    for g in &corpus {
        let o = left_sparse_ordering(g);
        let listed = left_tri_listing(g, &o);
        let total: u64 = listed.iter().sum();
        if o.left_tri != listed || total != triangle_count(g) || o.left_tri.iter().sum::<u64>() != total {
            violations += 1;
        }
        // recorded steps: chain of residual graphs from right to left
        let mut remaining = total;
        let mut alive = vec![true; g.n()];
        let small = g.n() <= 300;
        let sets = neighbor_sets(g);
        for (k, s) in o.steps.iter().enumerate() {
            steps += 1;
            let ok_chain = s.residual_n == g.n() - k && s.residual_triangles == remaining && o.order[g.n() - 1 - k] == s.vertex;
            let ok_bound = s.residual_tri as u128 * s.residual_n as u128 <= 3 * s.residual_triangles as u128;
            let ok_count = !small || {
                let nb: Vec<u32> = g.neighbors(s.vertex).iter().copied().filter(|&w| alive[w as usize]).collect();
                let mut c = 0u64;
                for (i, &x) in nb.iter().enumerate() {
                    c += nb[i + 1..].iter().filter(|&&y| sets[x as usize].contains(&y)).count() as u64;
                }
                c == s.residual_tri
            };
            if !(ok_chain && ok_bound && ok_count) {
                violations += 1;
            }
            remaining -= s.residual_tri.min(remaining);
            alive[s.vertex as usize] = false;
        }
        if o.steps.len() != g.n() || remaining != 0 {
            violations += 1;
        }
    }
    Outcome {
        passed: violations == 0,
        detail: format!("{} instances, {steps} extraction steps, {violations} violations", corpus.len()),
        ..Default::default()
    }
}

// 4

fn partition_corpus() -> Vec<(String, Graph, u64)> {
    let mut out = Vec::new();
    for s in 1..=5usize {
        out.push((
            format!("blowup_k3 s={s}"),
            classic::disjoint_union(&blowup(&classic::complete(3), s), 10),
            s as u64 + 1,
        ));
    }
    for s in [2usize, 4] {
        out.push((format!("blowup_c5 s={s}"), blowup(&classic::cycle(5), s), 1));
    }
    for (k, &(n, d, t)) in [
        (500usize, 8.0, 1u64),
        (1000, 16.0, 1),
        (2000, 12.0, 2),
        (3000, 20.0, 1),
        (800, 40.0, 2),
    ]
    .iter()
    .enumerate()
    {
        out.push((format!("gnp n={n} d={d}"), gen::gnp(n, d / n as f64, 4000 + k as u64).unwrap(), t));
    }
    out.push(("complete 30".into(), classic::complete(30), 10));
    out.push(("scrubbed n=2000 d=20".into(), gen::triangle_scrubbed_gnp(2000, 0.01, 4).unwrap(), 1));
    out
}

/// Events at every vertex recomputed from their definitions.
fn event_count(g: &Graph, o: &VertexOrdering, coloring: &[u32], p: &PartitionParams) -> usize {
    let sets = neighbor_sets(g);
    let mut events = 0;
    for v in g.vertices() {
        let c = coloring[v as usize];
        let left: Vec<u32> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| o.position[u as usize] < o.position[v as usize])
            .collect();
        let same = g.neighbors(v).iter().filter(|&&u| coloring[u as usize] == c).count() as u64;
        let bad = |u: u32| left.iter().filter(|&&w| sets[u as usize].contains(&w)).count() as u64 >= p.bad_threshold;
        let bad_same = left.iter().filter(|&&u| coloring[u as usize] == c && bad(u)).count() as u64;
        let good: Vec<u32> = left.iter().copied().filter(|&u| coloring[u as usize] == c && !bad(u)).collect();
        let mut good_edges = 0u64;
        for (i, &x) in good.iter().enumerate() {
            good_edges += good[i + 1..].iter().filter(|&&y| sets[x as usize].contains(&y)).count() as u64;
        }
        events += (same > p.part_degree_bound) as usize + (bad_same > p.kappa_bad) as usize + (good_edges >= p.mu) as usize;
    }
    events
}

fn partition_certificate() -> Outcome {
    let mut failures = Vec::new();
    let mut resamples = Vec::new();
    for (k, (name, g, t)) in partition_corpus().into_iter().enumerate() {
        let params = default_params(g.max_degree().max(1) as u64, t);
        let o = left_sparse_ordering(&g);
        let result = moser_tardos_partition(&g, &o, &params, &mut stream(k as u64, Tag::Partition, 0))
            .and_then(|mt| cleanup_to_triangle_free(&g, &o, &mt.coloring, &params).map(|c| (mt, c)));
        let (mt, cleanup) = match result {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        resamples.push(mt.resamples);
        let class = &cleanup.partition.class_of;
        let sets = neighbor_sets(&g);
        let mut class_triangles = 0u64;
        let mut max_class_degree = 0usize;
        for u in g.vertices() {
            let same: Vec<u32> = g
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&w| class[w as usize] == class[u as usize])
                .collect();
            max_class_degree = max_class_degree.max(same.len());
            for (i, &x) in same.iter().enumerate() {
                class_triangles += same[i + 1..].iter().filter(|&&y| sets[x as usize].contains(&y)).count() as u64;
            }
        }
        let k_classes = class.iter().copied().collect::<HashSet<u32>>().len();
        let events = event_count(&g, &o, &mt.coloring, &params);
        if class_triangles != 0
            || max_class_degree as u64 > params.part_degree_bound
            || k_classes as u128 > params.class_bound()
            || events != 0
        {
            failures.push(format!(
                "{name}: triangles {class_triangles}, degree {max_class_degree}/{}, classes {k_classes}, events {events}",
                params.part_degree_bound
            ));
        }
    }
    let total = partition_corpus().len();
    Outcome {
        passed: failures.is_empty(),
        detail: format!(
            "{total} instances, {} failures, resamples {:?}{}",
            failures.len(),
            resamples,
            failures.first().map(|f| format!("; {f}")).unwrap_or_default()
        ),
        ..Default::default()
    }
}

// 5

/// Exact `E|K|`, `E e(H[K])` and per-vertex survival by summing over all
/// activation and coin outcomes.
fn enumerate_step(g: &Graph, p: f64) -> (f64, f64, Vec<f64>) {
    let n = g.n();
    let delta = g.max_degree() as i32;
    let gamma = (1.0 - p).powi(delta);
    let coin: Vec<f64> = g.vertices().map(|v| gamma / (1.0 - p).powi(g.degree(v) as i32)).collect();
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (u as usize, v as usize)).collect();
    let (mut ek, mut ee) = (0.0, 0.0);
    let mut per_vertex = vec![0.0; n];
    for active in 0u32..1 << n {
        let pa: f64 = (0..n).map(|v| if active >> v & 1 == 1 { p } else { 1.0 - p }).product();
        for heads in 0u32..1 << n {
            let pc: f64 = (0..n).map(|v| if heads >> v & 1 == 1 { coin[v] } else { 1.0 - coin[v] }).product();
            let w = pa * pc;
            if w == 0.0 {
                continue;
            }
            let survives =
                |v: usize| heads >> v & 1 == 1 && active >> v & 1 == 0 && g.neighbors(v as u32).iter().all(|&u| active >> u & 1 == 0);
            for (v, slot) in per_vertex.iter_mut().enumerate() {
                if survives(v) {
                    *slot += w;
                    ek += w;
                }
            }
            ee += w * edges.iter().filter(|&&(u, v)| survives(u) && survives(v)).count() as f64;
        }
    }
    (ek, ee, per_vertex)
}

fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(u32, u32)> = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .map(move |mask| Graph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap())
}

fn nibble_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut graphs = 0;
    for n in 1..=4 {
        for g in all_graphs(n) {
            graphs += 1;
            for p in [0.05, 0.3, 0.5, 0.9] {
                let (ek, ee, per_vertex) = enumerate_step(&g, p);
                let gamma = (1.0 - p).powi(g.max_degree() as i32);
                worst = worst.max((ek - expected_survivors(&g, p)).abs());
                worst = worst.max((ee - expected_residual_edges(&g, p)).abs());
                for pv in per_vertex {
                    worst = worst.max((pv - gamma * (1.0 - p)).abs());
                }
            }
        }
    }
    let mut mc = Vec::new();
    let mut mc_ok = true;
    let trials = 100_000u64;
    for (name, g, p) in [
        ("P3", classic::path(3), 0.5),
        ("C5", classic::cycle(5), 0.3),
        ("K4", classic::complete(4), 0.2),
    ] {
        let mut rng = stream(5, Tag::Test, 0);
        let (mut sk, mut skk, mut se, mut see) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..trials {
            let r = iset_step(&g, p, &mut rng, 40);
            let (k, e) = (r.stats.survivors as f64, r.stats.residual_edges as f64);
            sk += k;
            skk += k * k;
            se += e;
            see += e * e;
        }
        let t = trials as f64;
        let z = |s: f64, ss: f64, expect: f64| {
            let mean = s / t;
            let sd = ((ss / t - mean * mean) * t / (t - 1.0)).max(0.0).sqrt();
            (mean - expect).abs() / (sd / t.sqrt())
        };
        let zk = z(sk, skk, expected_survivors(&g, p));
        let ze = z(se, see, expected_residual_edges(&g, p));
        mc_ok &= zk <= 4.0 && ze <= 4.0;
        mc.push(format!("{name} z=({zk:.2}, {ze:.2})"));
    }
    Outcome {
        passed: worst <= 1e-9 && mc_ok,
        detail: format!(
            "{graphs} graphs exhaustive, max error {worst:.1e}; Monte Carlo {trials} trials {}",
            mc.join(", ")
        ),
        ..Default::default()
    }
}

// 6, 7

fn nibble_corpus() -> Vec<Graph> {
    let mut out = ordering_corpus();
    out.extend(partition_corpus().into_iter().map(|(_, g, _)| g));
    for (k, d) in [8.0, 16.0, 32.0].into_iter().enumerate() {
        out.push(gen::gnp(20_000, d / 20_000.0, 6000 + k as u64).unwrap());
    }
    out.push(gen::random_regular(20_000, 10, 6).unwrap());
    out
}

struct CorpusRuns {
    cleaning_checked: usize,
    cleaning_guarded: usize,
    cleaning_violations: usize,
    nibble_runs: usize,
    nibble_failures: usize,
    colorings: usize,
    coloring_failures: usize,
}

fn corpus_runs() -> CorpusRuns {
    let mut r = CorpusRuns {
        cleaning_checked: 0,
        cleaning_guarded: 0,
        cleaning_violations: 0,
        nibble_runs: 0,
        nibble_failures: 0,
        colorings: 0,
        coloring_failures: 0,
    };
    for (k, g) in nibble_corpus().iter().enumerate() {
        for eps in [0.1, 0.25, 0.5] {
            let out = run_nibble(g, &NibbleParams::new(eps, 1), &mut stream(k as u64, Tag::Nibble, 0)).unwrap();
            let rep = check_cleaning_inequalities(&out.trace);
            r.cleaning_checked += rep.checked;
            r.cleaning_guarded += rep.guarded;
            r.cleaning_violations += rep.violations.len();
            r.nibble_runs += 1;
            r.nibble_failures += !is_independent(g, &out.iset) as usize;
        }
        if g.n() <= 5000 {
            for choice in PartColorerChoice::ALL {
                let params = default_params(g.max_degree().max(1) as u64, 2);
                r.colorings += 1;
                let ok = color_kttt_free(g, &params, choice, &mut stream(k as u64, Tag::Partition, 0))
                    .map(|c| verify_coloring(g, &c.coloring).map(|v| v.passed).unwrap_or(false))
                    .unwrap_or(false);
                r.coloring_failures += !ok as usize;
            }
        }
    }
    r
}

// 8, 9

fn dominance_config(threads: usize, dir: &std::path::Path) -> RunConfig {
    let instances = [32, 64]
        .map(|d| Instance::Spec(format!("gnp:n=200000,d={d}").parse::<GenSpec>().unwrap()))
        .to_vec();
    let mut config = RunConfig::new(instances, (1..=5).collect(), vec![Algorithm::Greedy, Algorithm::Nibble]);
    config.nibble = NibbleParams::new(0.25, 1);
    config.threads = threads;
    config.artifact_dir = Some(dir.to_path_buf());
    config.csv = Some(dir.join("runs.csv"));
    config
}

fn dominance(reports: &[RunReport]) -> Outcome {
    let mut lines = Vec::new();
    let mut all = true;
    for r in reports.iter().filter(|r| r.algorithm == "nibble") {
        let ok = r.size >= r.greedy_baseline;
        all &= ok;
        lines.push(format!(
            "d={:.0} seed={} {}{}{} ({:.3} of target)",
            r.d,
            r.seed,
            r.size,
            if ok { ">=" } else { "<" },
            r.greedy_baseline,
            r.size as f64 / r.shearer_target
        ));
    }
    Outcome {
        passed: all && lines.len() == 10,
        detail: lines.join("; "),
        ..Default::default()
    }
}

fn main() {
    let mut passed = vec![
        criterion(
            1,
            "triangle count vs all-triples oracle",
            Some(Duration::from_secs(10)),
            triangles_oracle,
        ),
        criterion(2, "exact MIS vs subset oracle", Some(Duration::from_secs(60)), mis_oracle),
        criterion(
            3,
            "left-sparse ordering certificate",
            Some(Duration::from_secs(60)),
            ordering_certificate,
        ),
        criterion(
            4,
            "triangle-free partition certificate",
            Some(Duration::from_secs(300)),
            partition_certificate,
        ),
        criterion(
            5,
            "nibble-step expectation identities",
            Some(Duration::from_secs(120)),
            nibble_identities,
        ),
    ];
    let start = Instant::now();
    let corpus = corpus_runs();
    let corpus_time = start.elapsed();
    let dir = tempfile::tempdir().unwrap();
    let (one, many) = (dir.path().join("t1"), dir.path().join("t4"));
    let start = Instant::now();
    let reports = run_suite(&dominance_config(1, &one)).unwrap();
    let first_run = start.elapsed();

    passed.push(criterion(6, "cleaning-step ratio inequalities", None, || {
        let big: usize = reports.iter().map(|r| r.cleaning_violations).sum();
        let big_steps: usize = reports.iter().map(|r| r.cleaning_steps).sum();
        Outcome {
            passed: corpus.cleaning_violations == 0 && big == 0,
            detail: format!(
                "{} nibble runs, {} steps checked, {} guarded, {} violations; large runs {big_steps} steps, {big} violations",
                corpus.nibble_runs, corpus.cleaning_checked, corpus.cleaning_guarded, corpus.cleaning_violations
            ),
            shared: corpus_time + first_run,
        }
    }));
    passed.push(criterion(7, "independence and proper colorings", None, || {
        let big_fail = reports.iter().filter(|r| !r.verified).count();
        Outcome {
            passed: corpus.nibble_failures == 0 && corpus.coloring_failures == 0 && big_fail == 0,
            detail: format!(
                "{} nibble sets ({} invalid), {} colorings ({} invalid), {} large runs ({big_fail} invalid)",
                corpus.nibble_runs,
                corpus.nibble_failures,
                corpus.colorings,
                corpus.coloring_failures,
                reports.len()
            ),
            shared: corpus_time + first_run,
        }
    }));
    passed.push(criterion(
        8,
        "nibble with finish vs greedy on G(2e5, d/n)",
        Some(Duration::from_secs(600)),
        || Outcome {
            shared: first_run,
            ..dominance(&reports)
        },
    ));
    passed.push(criterion(9, "determinism across thread counts", None, || {
        let again = run_suite(&dominance_config(4, &many)).unwrap();
        let rows_equal = reports.len() == again.len() && reports.iter().zip(&again).all(|(a, b)| a.replay_key() == b.replay_key());
        let mut files = 0;
        let mut differing = 0;
        for entry in std::fs::read_dir(&one).unwrap() {
            let name = entry.unwrap().file_name();
            if name.to_string_lossy().ends_with(".txt") {
                files += 1;
                differing += (std::fs::read(one.join(&name)).unwrap() != std::fs::read(many.join(&name)).unwrap_or_default()) as usize;
            }
        }
        Outcome {
            passed: rows_equal && files == 20 && differing == 0,
            detail: format!("{} rows equal: {rows_equal}; {files} set files, {differing} differ", reports.len()),
            shared: first_run,
        }
    }));

    let failed = passed.iter().filter(|&&p| !p).count();
    println!("acceptance: {} of {} criteria passed", passed.len() - failed, passed.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
