//! Codegree profiles and left-sparse vertex orderings.
//!
//! The ordering is built right to left: the vertex lying in the fewest
//! triangles of the residual graph is placed in the rightmost free slot and
//! deleted. A vertex's left-triangle count (triangles whose other two
//! vertices precede it) is then exactly its residual triangle count at the
//! moment it was extracted.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{common_neighbor_count, triangles_per_vertex, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodegreeProfile {
    /// `(u, v, q)` per edge `u < v`, in edge order.
    pub edges: Vec<(u32, u32, u32)>,
    pub sum: u64,
    pub max: u32,
    /// `histogram[q]` = number of edges with codegree `q`.
    pub histogram: Vec<u64>,
}

pub fn codegree_profile(g: &Graph) -> CodegreeProfile {
    let edges: Vec<(u32, u32, u32)> = g.edges().map(|(u, v)| (u, v, common_neighbor_count(g, u, v) as u32)).collect();
    let max = edges.iter().map(|e| e.2).max().unwrap_or(0);
    let mut histogram = vec![0u64; max as usize + 1];
    let mut sum = 0u64;
    for &(_, _, q) in &edges {
        histogram[q as usize] += 1;
        sum += q as u64;
    }
    CodegreeProfile {
        edges,
        sum,
        max,
        histogram,
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `Σ_e C(q_e, t)`: a floor on the number of `K_{1,1,t}` copies, exact.
pub fn star_extension_floor(profile: &CodegreeProfile, t: u64) -> BigUint {
    profile
        .histogram
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(q, &c)| binomial(q as u64, t) * BigUint::from(c))
        .sum()
}

/// One extraction of the greedy construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionStep {
    pub vertex: u32,
    /// Triangles through `vertex` in the residual graph it was taken from.
    pub residual_tri: u64,
    /// Triangles and vertices of that residual graph.
    pub residual_triangles: u64,
    pub residual_n: usize,
}

impl ExtractionStep {
    /// `residual_tri <= 3 T / n` in exact integer form.
    pub fn satisfies_averaging_bound(&self) -> bool {
        self.residual_tri as u128 * self.residual_n as u128 <= 3 * self.residual_triangles as u128
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrdering {
    /// `order[i]` is the vertex at position `i`.
    pub order: Vec<u32>,
    /// `position[v]` is the index of `v` in `order`.
    pub position: Vec<u32>,
    /// Per vertex id: triangles `uvw` with `v, w` both preceding `u`.
    pub left_tri: Vec<u64>,
    /// Extraction log in extraction order (rightmost first). Empty for
    /// orderings not produced by [`left_sparse_ordering`].
    pub steps: Vec<ExtractionStep>,
}

impl VertexOrdering {
    /// Wraps an arbitrary order, computing positions and left-triangle counts.
    pub fn from_order(g: &Graph, order: Vec<u32>) -> Result<Self> {
        let position = positions(g.n(), &order)?;
        let left_tri = left_triangle_counts(g, &position);
        Ok(VertexOrdering {
            order,
            position,
            left_tri,
            steps: Vec::new(),
        })
    }

    pub fn left_tri_along_order(&self) -> Vec<u64> {
        self.order.iter().map(|&v| self.left_tri[v as usize]).collect()
    }

    #[inline]
    pub fn precedes(&self, u: u32, v: u32) -> bool {
        self.position[u as usize] < self.position[v as usize]
    }

    /// `N_L(v)` in increasing id order.
    pub fn left_neighbors<'a>(&'a self, g: &'a Graph, v: u32) -> impl Iterator<Item = u32> + 'a {
        g.neighbors(v).iter().copied().filter(move |&u| self.precedes(u, v))
    }
}

fn positions(n: usize, order: &[u32]) -> Result<Vec<u32>> {
    if order.len() != n {
        return Err(Error::NotAPermutation {
            n,
            msg: format!("length {} differs from n", order.len()),
        });
    }
    let mut position = vec![u32::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v as usize >= n {
            return Err(Error::NotAPermutation {
                n,
                msg: format!("vertex {v} out of range"),
            });
        }
        if position[v as usize] != u32::MAX {
            return Err(Error::NotAPermutation {
                n,
                msg: format!("vertex {v} repeated"),
            });
        }
        position[v as usize] = i as u32;
    }
    Ok(position)
}

/// For each edge `wv` with `w` before `v`, count common neighbors before `w`;
/// each triangle is seen once, at its rightmost vertex.
fn left_triangle_counts(g: &Graph, position: &[u32]) -> Vec<u64> {
    let pos = |x: u32| position[x as usize];
    g.vertices()
        .map(|u| {
            g.neighbors(u)
                .iter()
                .filter(|&&v| pos(v) < pos(u))
                .map(|&v| {
                    let (a, b) = (g.neighbors(u), g.neighbors(v));
                    let (mut i, mut j, mut c) = (0, 0, 0u64);
                    while i < a.len() && j < b.len() {
                        match a[i].cmp(&b[j]) {
                            std::cmp::Ordering::Less => i += 1,
                            std::cmp::Ordering::Greater => j += 1,
                            std::cmp::Ordering::Equal => {
                                c += (pos(a[i]) < pos(v)) as u64;
                                i += 1;
                                j += 1;
                            }
                        }
                    }
                    c
                })
                .sum()
        })
        .collect()
}

/// Greedy right-to-left ordering by minimum residual triangle count
/// (lowest id on ties), maintained incrementally.
pub fn left_sparse_ordering(g: &Graph) -> VertexOrdering {
    let n = g.n();
    let mut tri = triangles_per_vertex(g);
    let mut residual_triangles: u64 = tri.iter().sum::<u64>() / 3;
    let mut alive = vec![true; n];
    let mut queue: BTreeSet<(u64, u32)> = g.vertices().map(|v| (tri[v as usize], v)).collect();
    let mut order = vec![0u32; n];
    let mut left_tri = vec![0u64; n];
    let mut steps = Vec::with_capacity(n);
    let mut live_nb: Vec<u32> = Vec::new();

    for slot in (0..n).rev() {
        let (count, z) = queue.pop_first().expect("one entry per live vertex");
        steps.push(ExtractionStep {
            vertex: z,
            residual_tri: count,
            residual_triangles,
            residual_n: slot + 1,
        });
        order[slot] = z;
        left_tri[z as usize] = count;
        residual_triangles -= count;
        alive[z as usize] = false;

        // every live triangle z-a-b loses z: decrement a and b
        live_nb.clear();
        live_nb.extend(g.neighbors(z).iter().copied().filter(|&a| alive[a as usize]));
        let mut lost = vec![0u64; live_nb.len()];
        for (i, &a) in live_nb.iter().enumerate() {
            let na = g.neighbors(a);
            let (mut p, mut q) = (i + 1, 0);
            while p < live_nb.len() && q < na.len() {
                match live_nb[p].cmp(&na[q]) {
                    std::cmp::Ordering::Less => p += 1,
                    std::cmp::Ordering::Greater => q += 1,
                    std::cmp::Ordering::Equal => {
                        lost[i] += 1;
                        lost[p] += 1;
                        p += 1;
                        q += 1;
                    }
                }
            }
        }
        for (i, &a) in live_nb.iter().enumerate() {
            if lost[i] > 0 {
                let old = tri[a as usize];
                queue.remove(&(old, a));
                tri[a as usize] = old - lost[i];
                queue.insert((tri[a as usize], a));
            }
        }
    }
    debug_assert_eq!(residual_triangles, 0);
    let position = positions(n, &order).expect("construction yields a permutation");
    VertexOrdering {
        order,
        position,
        left_tri,
        steps,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftSparsityReport {
    pub max_left_tri: u64,
    /// Vertices whose recomputed left-triangle count exceeds the bound.
    pub violators: Vec<u32>,
    pub left_tri_sum: u64,
    pub triangle_count: u64,
    /// Whether the stored counts agree with the recomputation.
    pub stored_counts_match: bool,
    pub passed: bool,
}

impl LeftSparsityReport {
    /// Rightmost-attribution identity: every triangle has exactly one rightmost vertex.
    pub fn attribution_identity_holds(&self) -> bool {
        self.left_tri_sum == self.triangle_count
    }
}

/// Recomputes left-triangle counts from scratch and checks them against `bound`.
pub fn verify_left_sparsity(g: &Graph, o: &VertexOrdering, bound: u64) -> Result<LeftSparsityReport> {
    let position = positions(g.n(), &o.order)?;
    let left = left_triangle_counts(g, &position);
    let max_left_tri = left.iter().copied().max().unwrap_or(0);
    let violators: Vec<u32> = g.vertices().filter(|&v| left[v as usize] > bound).collect();
    let left_tri_sum: u64 = left.iter().sum();
    let triangle_count = crate::graph::triangle_count(g);
    let stored_counts_match = o.left_tri == left && o.position == position;
    let passed = violators.is_empty() && left_tri_sum == triangle_count && stored_counts_match;
    Ok(LeftSparsityReport {
        max_left_tri,
        violators,
        left_tri_sum,
        triangle_count,
        stored_counts_match,
        passed,
    })
}
