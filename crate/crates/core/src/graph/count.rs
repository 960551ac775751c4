use rayon::prelude::*;

use super::Graph;

/// Size of the intersection of two strictly increasing slices.
#[inline]
pub(crate) fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// `|N(u) ∩ N(v)|` by sorted merge.
pub fn common_neighbor_count(g: &Graph, u: u32, v: u32) -> usize {
    intersection_size(g.neighbors(u), g.neighbors(v))
}

/// Orients every edge from lower to higher `(degree, id)` rank; out-lists stay
/// sorted by id so they can be merged.
fn forward_adjacency(g: &Graph) -> Vec<Vec<u32>> {
    let key = |v: u32| (g.degree(v), v);
    g.vertices()
        .map(|u| g.neighbors(u).iter().copied().filter(|&v| key(v) > key(u)).collect())
        .collect()
}

/// Number of triangles, each counted once (forward algorithm over a degree order).
pub fn triangle_count(g: &Graph) -> u64 {
    let out = forward_adjacency(g);
    (0..g.n())
        .into_par_iter()
        .map(|u| {
            out[u]
                .iter()
                .map(|&v| intersection_size(&out[u], &out[v as usize]) as u64)
                .sum::<u64>()
        })
        .sum()
}

/// Number of triangles containing `v`.
pub fn triangles_through(g: &Graph, v: u32) -> u64 {
    let nv = g.neighbors(v);
    let twice: usize = nv.iter().map(|&u| intersection_size(nv, g.neighbors(u))).sum();
    (twice / 2) as u64
}

/// `triangles_through` for every vertex at once.
pub fn triangles_per_vertex(g: &Graph) -> Vec<u64> {
    let out = forward_adjacency(g);
    let mut counts = vec![0u64; g.n()];
    for u in 0..g.n() {
        for &v in &out[u] {
            let (a, b) = (&out[u], &out[v as usize]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        counts[u] += 1;
                        counts[v as usize] += 1;
                        counts[a[i] as usize] += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    counts
}
