//! Library results against slow, independent recomputations.

use kttt_core::gen::{self, blowup, classic};
use kttt_core::graph::{common_neighbor_count, contains_kttt, exact_mis, triangle_count, triangles_per_vertex, Graph};
use kttt_core::partition::{classify_left_bad, default_params, find_bad_events, moser_tardos_partition, EventKind, PartitionParams};
use kttt_core::rng::{stream, Tag};
use kttt_core::turan::{codegree_profile, left_sparse_ordering, VertexOrdering};
use num_bigint::BigUint;
use rand::seq::SliceRandom;

fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u as usize][v as usize] = true;
        a[v as usize][u as usize] = true;
    }
    a
}

fn corpus() -> Vec<Graph> {
    let mut out = vec![
        classic::complete(6),
        classic::petersen(),
        blowup(&classic::complete(3), 3),
        blowup(&classic::cycle(5), 2),
    ];
    for seed in 0..6 {
        out.push(gen::gnp(30, 0.3, seed).unwrap());
    }
    out
}

#[test]
fn codegrees_and_triangles_match_matrix_scan() {
    for g in corpus() {
        let a = matrix(&g);
        let n = g.n();
        let mut per_vertex = vec![0u64; n];
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    if a[x][y] && a[y][z] && a[x][z] {
                        for v in [x, y, z] {
                            per_vertex[v] += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(triangles_per_vertex(&g), per_vertex);
        assert_eq!(triangle_count(&g), per_vertex.iter().sum::<u64>() / 3);
        let profile = codegree_profile(&g);
        for &(u, v, q) in &profile.edges {
            let brute = (0..n).filter(|&w| a[u as usize][w] && a[v as usize][w]).count();
            assert_eq!(q as usize, brute);
            assert_eq!(common_neighbor_count(&g, u, v), brute);
        }
        assert_eq!(profile.sum, 3 * triangle_count(&g));
    }
}

/// Triangles whose last vertex in `order` is `v`.
fn left_tri_brute(a: &[Vec<bool>], order: &[u32]) -> Vec<u64> {
    let n = a.len();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut out = vec![0u64; n];
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                if a[x][y] && a[y][z] && a[x][z] {
                    let last = *[x, y, z].iter().max_by_key(|&&v| pos[v]).unwrap();
                    out[last] += 1;
                }
            }
        }
    }
    out
}

#[test]
fn left_triangle_counts_match_brute_force() {
    let mut rng = stream(3, Tag::Test, 0);
    for g in corpus() {
        let a = matrix(&g);
        let o = left_sparse_ordering(&g);
        assert_eq!(o.left_tri, left_tri_brute(&a, &o.order));
        let mut order: Vec<u32> = g.vertices().collect();
        order.shuffle(&mut rng);
        let shuffled = VertexOrdering::from_order(&g, order.clone()).unwrap();
        assert_eq!(shuffled.left_tri, left_tri_brute(&a, &order));
    }
}

#[test]
fn extraction_picks_a_minimum_each_time() {
    for g in corpus() {
        let a = matrix(&g);
        let o = left_sparse_ordering(&g);
        let mut alive = vec![true; g.n()];
        for step in &o.steps {
            let tri_in = |v: usize| {
                let nb: Vec<usize> = (0..g.n()).filter(|&w| alive[w] && a[v][w]).collect();
                let mut c = 0u64;
                for (i, &x) in nb.iter().enumerate() {
                    for &y in &nb[i + 1..] {
                        c += a[x][y] as u64;
                    }
                }
                c
            };
            let min = (0..g.n()).filter(|&v| alive[v]).map(tri_in).min().unwrap();
            assert_eq!(step.residual_tri, min);
            assert_eq!(tri_in(step.vertex as usize), min);
            alive[step.vertex as usize] = false;
        }
    }
}

#[test]
fn bad_neighbor_classification_matches_definition() {
    for g in corpus() {
        let a = matrix(&g);
        let o = left_sparse_ordering(&g);
        for threshold in [1u64, 2, 3] {
            for v in g.vertices() {
                let left: Vec<usize> = (0..g.n())
                    .filter(|&u| a[v as usize][u] && o.position[u] < o.position[v as usize])
                    .collect();
                let expect: Vec<u32> = left
                    .iter()
                    .filter(|&&u| left.iter().filter(|&&w| a[u][w]).count() as u64 >= threshold)
                    .map(|&u| u as u32)
                    .collect();
                assert_eq!(classify_left_bad(&g, &o, v, threshold).to_vec(), expect);
            }
        }
    }
}

/// Events recomputed from their definitions on an adjacency matrix.
fn events_brute(a: &[Vec<bool>], o: &VertexOrdering, coloring: &[u32], p: &PartitionParams) -> Vec<(u32, EventKind)> {
    let n = a.len();
    let mut out = Vec::new();
    for v in 0..n {
        let c = coloring[v];
        let same: Vec<usize> = (0..n).filter(|&u| a[v][u] && coloring[u] == c).collect();
        let left: Vec<usize> = (0..n).filter(|&u| a[v][u] && o.position[u] < o.position[v]).collect();
        let is_bad = |u: usize| left.iter().filter(|&&w| a[u][w]).count() as u64 >= p.bad_threshold;
        let bad_same = left.iter().filter(|&&u| coloring[u] == c && is_bad(u)).count() as u64;
        let good_same: Vec<usize> = left.iter().copied().filter(|&u| coloring[u] == c && !is_bad(u)).collect();
        let mut good_edges = 0u64;
        for (i, &x) in good_same.iter().enumerate() {
            for &y in &good_same[i + 1..] {
                good_edges += a[x][y] as u64;
            }
        }
        if same.len() as u64 > p.part_degree_bound {
            out.push((v as u32, EventKind::A));
        }
        if bad_same > p.kappa_bad {
            out.push((v as u32, EventKind::B));
        }
        if good_edges >= p.mu {
            out.push((v as u32, EventKind::C));
        }
    }
    out
}

#[test]
fn bad_events_match_definition_on_random_colorings() {
    let params = PartitionParams {
        ell: 3,
        kappa_bad: 1,
        mu: 2,
        bad_threshold: 2,
        part_degree_bound: 2,
        max_resamples: 100_000,
    };
    for (k, g) in corpus().into_iter().enumerate() {
        let a = matrix(&g);
        let o = left_sparse_ordering(&g);
        let mut rng = stream(k as u64, Tag::Test, 1);
        for _ in 0..10 {
            let coloring: Vec<u32> = g.vertices().map(|_| rand::Rng::random_range(&mut rng, 0..3)).collect();
            let got: Vec<(u32, EventKind)> = find_bad_events(&g, &o, &coloring, &params)
                .unwrap()
                .iter()
                .map(|e| (e.vertex, e.kind))
                .collect();
            assert_eq!(got, events_brute(&a, &o, &coloring, &params));
        }
    }
}

#[test]
fn resampling_output_has_no_events_by_definition() {
    for (k, g) in corpus().into_iter().enumerate() {
        let a = matrix(&g);
        let o = left_sparse_ordering(&g);
        let params = default_params(g.max_degree() as u64, 2);
        let out = moser_tardos_partition(&g, &o, &params, &mut stream(k as u64, Tag::Partition, 0)).unwrap();
        assert!(events_brute(&a, &o, &out.coloring, &params).is_empty());
    }
}

/// Smallest `x` with `x^den >= delta^num`.
fn ceil_root(delta: u64, num: u32, den: u32) -> u64 {
    let target = BigUint::from(delta).pow(num);
    let (mut lo, mut hi) = (0u64, delta.max(1));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if BigUint::from(mid).pow(den) >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

#[test]
fn default_params_match_exact_integer_roots() {
    for &(delta, t) in &[(1_000_000u64, 2u64), (1 << 20, 1), (1000, 1), (777, 3), (2, 1), (50_000, 2)] {
        let p = default_params(delta, t);
        let t2 = (t * t) as u32;
        assert_eq!(p.ell, ceil_root(delta, 10 * t2 - 1, 10 * t2), "ell at {delta}, {t}");
        assert_eq!(p.bad_threshold, ceil_root(delta, 2 * t2 - 1, 2 * t2), "threshold at {delta}, {t}");
        assert_eq!(
            p.part_degree_bound,
            2 * ceil_root(delta, 1, 10 * t2),
            "degree bound at {delta}, {t}"
        );
        assert_eq!(p.kappa_bad, 35 * t * t);
        assert_eq!(p.mu, 100 * t.pow(4));
    }
    let p = default_params(1_000_000, 2);
    assert_eq!(
        (p.ell, p.bad_threshold, p.part_degree_bound, p.kappa_bad, p.mu),
        (707_946, 177_828, 4, 140, 1600)
    );
}

/// Size of a maximum independent set by scanning all subsets.
fn alpha_brute(a: &[Vec<bool>]) -> usize {
    let n = a.len();
    let masks: Vec<u32> = (0..n).map(|v| (0..n).filter(|&u| a[v][u]).fold(0u32, |m, u| m | 1 << u)).collect();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || masks[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

#[test]
fn exact_mis_matches_subset_scan() {
    for seed in 0..15 {
        let g = gen::gnp(14, 0.1 + 0.05 * (seed % 8) as f64, seed).unwrap();
        let best = exact_mis(&g, 40).unwrap();
        assert_eq!(best.len(), alpha_brute(&matrix(&g)));
    }
}

/// Whether some three disjoint `t`-sets are pairwise completely joined.
fn kttt_brute(a: &[Vec<bool>], t: usize) -> bool {
    let n = a.len();
    let sets: Vec<u32> = (0u32..1 << n).filter(|s| s.count_ones() as usize == t).collect();
    let joined = |x: u32, y: u32| (0..n).all(|u| x >> u & 1 == 0 || (0..n).all(|v| y >> v & 1 == 0 || a[u][v]));
    for &x in &sets {
        for &y in sets.iter().filter(|&&y| y > x && y & x == 0 && joined(x, y)) {
            if sets.iter().any(|&z| z > y && z & (x | y) == 0 && joined(x, z) && joined(y, z)) {
                return true;
            }
        }
    }
    false
}

#[test]
fn kttt_search_matches_subset_scan() {
    for seed in 0..8 {
        let g = gen::gnp(9, 0.75, seed).unwrap();
        let a = matrix(&g);
        for t in 1..=2 {
            assert_eq!(contains_kttt(&g, t, u64::MAX).unwrap(), kttt_brute(&a, t), "seed {seed}, t {t}");
        }
    }
}
