use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{common_neighbor_count, deletion_greedy_independent_set, exact_mis, Graph, RelabeledSubgraph, VertexSet};

/// Counts from one nibble step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsetStats {
    pub activated: usize,
    pub activated_edges: usize,
    pub independent: usize,
    pub survivors: usize,
    pub residual_edges: usize,
    pub p: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsetStepResult {
    /// `A`, each vertex independently with probability `p`.
    pub activated: VertexSet,
    /// `I`, an independent set inside `A`.
    pub independent: VertexSet,
    /// `K`, vertices whose coin succeeded and whose closed neighborhood misses `A`.
    pub survivors: VertexSet,
    /// `H[K]`.
    pub residual: RelabeledSubgraph,
    pub stats: IsetStats,
}

/// `ln gamma = Delta * ln(1 - p)`.
fn ln_gamma(h: &Graph, p: f64) -> f64 {
    h.max_degree() as f64 * (-p).ln_1p()
}

/// Success probability of the equalizing coin of a vertex of degree `deg`:
/// `gamma / (1-p)^deg`.
pub fn equalizing_probability(max_degree: u32, deg: u32, p: f64) -> f64 {
    debug_assert!(deg <= max_degree);
    let q = ((max_degree - deg) as f64 * (-p).ln_1p()).exp();
    assert!((0.0..=1.0).contains(&q), "coin probability {q} outside [0, 1]");
    q
}

/// One nibble step on `h` with activation probability `p`.
///
/// For each vertex in id order two uniforms are drawn: activation, then the
/// equalizing coin. `I` is a maximum independent set of `h[A]` when
/// `|A| <= mis_node_cap`, and the deletion-greedy set otherwise; both have
/// at least `|A| - e(h[A])` vertices.
pub fn iset_step<R: Rng>(h: &Graph, p: f64, rng: &mut R, mis_node_cap: usize) -> IsetStepResult {
    assert!(p > 0.0 && p < 1.0, "activation probability {p} outside (0, 1)");
    assert!(h.n() > 0, "nibble step on an empty graph");
    let n = h.n();
    let delta = h.max_degree();
    let mut activated = VertexSet::new(n);
    let mut coin = vec![false; n];
    for v in h.vertices() {
        if rng.random::<f64>() < p {
            activated.insert(v);
        }
        coin[v as usize] = rng.random::<f64>() < equalizing_probability(delta, h.degree(v), p);
    }
    let survivors = VertexSet::from_iter(
        n,
        h.vertices()
            .filter(|&v| coin[v as usize] && !activated.contains(v) && h.neighbors(v).iter().all(|&w| !activated.contains(w))),
    );
    let inner = h.induced(&activated);
    let local = if activated.len() <= mis_node_cap {
        exact_mis(&inner.graph, mis_node_cap).expect("size checked against the cap")
    } else {
        deletion_greedy_independent_set(&inner.graph)
    };
    let independent = inner.lift(&local, n);
    let residual = h.induced(&survivors);
    let stats = IsetStats {
        activated: activated.len(),
        activated_edges: inner.graph.m(),
        independent: independent.len(),
        survivors: survivors.len(),
        residual_edges: residual.graph.m(),
        p,
        gamma: ln_gamma(h, p).exp(),
    };
    IsetStepResult {
        activated,
        independent,
        survivors,
        residual,
        stats,
    }
}

/// `E|K| = gamma (1-p) n`.
pub fn expected_survivors(h: &Graph, p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    h.n() as f64 * (ln_gamma(h, p) + (-p).ln_1p()).exp()
}

/// `E e(H[K]) = gamma^2 * sum over edges uv of (1-p)^(-codeg(u, v))`.
pub fn expected_residual_edges(h: &Graph, p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    let lg = ln_gamma(h, p);
    let l1p = (-p).ln_1p();
    h.edges()
        .map(|(u, v)| (2.0 * lg - common_neighbor_count(h, u, v) as f64 * l1p).exp())
        .sum()
}

/// Whether the cleaning rule applies: some degree exceeds `(1 + eps/10)` times the average.
pub fn cleaning_fires(max_degree: u32, twice_m: u64, n: usize, eps: f64) -> bool {
    n > 0 && max_degree as f64 > (1.0 + eps / 10.0) * (twice_m as f64 / n as f64)
}

/// Removes a maximum-degree vertex (lowest id on ties) when the cleaning
/// rule applies. Returns the smaller graph and the removed vertex.
pub fn cleaning_step(h: &Graph, eps: f64) -> Option<(RelabeledSubgraph, u32)> {
    let stats = h.degrees();
    if !cleaning_fires(stats.max, stats.twice_m, stats.n, eps) {
        return None;
    }
    let v = h.vertices().find(|&v| h.degree(v) == stats.max).expect("non-empty");
    let mut keep = VertexSet::full(h.n());
    keep.remove(v);
    Some((h.induced(&keep), v))
}
