//! Partition into parts inducing triangle-free subgraphs of small maximum degree.
//!
//! Pipeline: color vertices uniformly from `[ell]`, resample until no bad
//! event `A_v`, `B_v`, `C_v` holds, then split every color class along the
//! vertex ordering so that no triangle survives inside a part.

mod events;
mod params;

pub use events::{classify_left_bad, find_bad_events, BadEvent, EventKind, Witness};
pub use params::{default_params, PartitionParams, DEFAULT_MAX_RESAMPLES};

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::turan::VertexOrdering;
use events::{check_coloring, EventContext};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResampleOutcome {
    pub coloring: Vec<u32>,
    pub resamples: u64,
}

/// Moser–Tardos resampling over the events `A_v`, `B_v`, `C_v`.
///
/// All colors start independent and uniform in `[ell]`. While some event
/// holds, the lowest `(vertex, kind)` event is taken and the colors of the
/// closed neighborhood of its vertex are redrawn. Only events of vertices
/// within distance two can change, so only those are re-evaluated.
pub fn moser_tardos_partition<R: Rng>(g: &Graph, o: &VertexOrdering, params: &PartitionParams, rng: &mut R) -> Result<ResampleOutcome> {
    params.validate()?;
    let ell = params.ell as u32;
    let mut coloring: Vec<u32> = g.vertices().map(|_| rng.random_range(0..ell)).collect();
    let mut ctx = EventContext::new(g, o, *params);
    let mut violated: BTreeSet<(u32, u8)> = BTreeSet::new();
    for v in g.vertices() {
        for (k, hit) in ctx.violated(v, &coloring).into_iter().enumerate() {
            if hit {
                violated.insert((v, k as u8));
            }
        }
    }
    let mut resamples = 0u64;
    let mut seen = vec![u64::MAX; g.n()];
    let mut touched = Vec::new();
    while let Some(&(v, _)) = violated.first() {
        if resamples >= params.max_resamples {
            return Err(Error::ResampleBudgetExhausted {
                resamples,
                remaining: violated.len(),
            });
        }
        resamples += 1;
        let closed = std::iter::once(v).chain(g.neighbors(v).iter().copied()).collect::<BTreeSet<u32>>();
        for &u in &closed {
            coloring[u as usize] = rng.random_range(0..ell);
        }
        touched.clear();
        for &u in &closed {
            for w in std::iter::once(u).chain(g.neighbors(u).iter().copied()) {
                if seen[w as usize] != resamples {
                    seen[w as usize] = resamples;
                    touched.push(w);
                }
            }
        }
        for &w in &touched {
            for k in 0..3u8 {
                violated.remove(&(w, k));
            }
            for (k, hit) in ctx.violated(w, &coloring).into_iter().enumerate() {
                if hit {
                    violated.insert((w, k as u8));
                }
            }
        }
    }
    Ok(ResampleOutcome { coloring, resamples })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCertificate {
    pub size: usize,
    pub triangle_count: u64,
    pub max_degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub class_of: Vec<u32>,
    pub k: usize,
    pub certificates: Vec<ClassCertificate>,
}

impl Partition {
    /// Builds a partition from arbitrary labels, renumbering them densely in
    /// increasing label order and certifying every class.
    pub fn from_labels(g: &Graph, labels: &[u32]) -> Result<Self> {
        if labels.len() != g.n() {
            return Err(Error::NotCovering(format!("{} labels for {} vertices", labels.len(), g.n())));
        }
        let ids: BTreeMap<u32, u32> = labels.iter().copied().collect::<BTreeSet<_>>().into_iter().zip(0..).collect();
        let class_of: Vec<u32> = labels.iter().map(|l| ids[l]).collect();
        let certificates = certify_classes(g, &class_of, ids.len());
        Ok(Partition {
            class_of,
            k: ids.len(),
            certificates,
        })
    }

    pub fn classes(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(v as u32);
        }
        out
    }
}

/// Per-class size, triangle count and maximum degree, without materializing subgraphs.
fn certify_classes(g: &Graph, class_of: &[u32], k: usize) -> Vec<ClassCertificate> {
    let mut certs = vec![
        ClassCertificate {
            size: 0,
            triangle_count: 0,
            max_degree: 0
        };
        k
    ];
    for u in g.vertices() {
        let c = class_of[u as usize];
        let cert = &mut certs[c as usize];
        cert.size += 1;
        let same: Vec<u32> = g.neighbors(u).iter().copied().filter(|&w| class_of[w as usize] == c).collect();
        cert.max_degree = cert.max_degree.max(same.len() as u32);
        for &v in same.iter().filter(|&&v| v > u) {
            cert.triangle_count += g
                .neighbors(v)
                .iter()
                .filter(|&&w| w > v && class_of[w as usize] == c)
                .filter(|&&w| same.binary_search(&w).is_ok())
                .count() as u64;
        }
    }
    certs
}

/// A triangle inside class `c`, if one exists.
fn class_triangle(g: &Graph, class_of: &[u32], c: u32) -> Option<[u32; 3]> {
    let inside = |x: u32| class_of[x as usize] == c;
    g.vertices().filter(|&u| inside(u)).find_map(|u| {
        g.neighbors(u).iter().copied().filter(|&v| v > u && inside(v)).find_map(|v| {
            g.neighbors(v)
                .iter()
                .copied()
                .find(|&w| w > v && inside(w) && g.has_edge(u, w))
                .map(|w| [u, v, w])
        })
    })
}

/// Result of splitting the color classes into triangle-free parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cleanup {
    pub partition: Partition,
    /// `kill_sets[v]`: same-class left-neighbors of `v` separated from `v`.
    pub kill_sets: Vec<Vec<u32>>,
    /// Sub-color of each vertex inside its color class.
    pub subcolor: Vec<u32>,
    pub max_kill_set: usize,
    /// Certified bound on `|kill_sets[v]|`, `kappa_bad + mu`.
    pub kill_set_bound: u64,
}

/// Greedy vertex cover: repeatedly take the endpoint of most uncovered edges
/// (lowest id on ties). Never larger than the number of edges.
fn greedy_cover(edges: &[(u32, u32)]) -> Vec<u32> {
    let mut remaining: Vec<(u32, u32)> = edges.to_vec();
    let mut cover = Vec::new();
    while !remaining.is_empty() {
        let mut count: BTreeMap<u32, usize> = BTreeMap::new();
        for &(a, b) in &remaining {
            *count.entry(a).or_default() += 1;
            *count.entry(b).or_default() += 1;
        }
        let (&pick, _) = count.iter().max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(x.0))).expect("non-empty");
        cover.push(pick);
        remaining.retain(|&(a, b)| a != pick && b != pick);
    }
    cover
}

/// Splits every color class `U_i` into triangle-free parts.
///
/// For each `v` the kill set is its same-class bad left-neighbors plus a
/// vertex cover of the edges among its same-class good left-neighbors. A
/// vertex and any member of its kill set must land in different parts, so
/// each class is colored greedily along the ordering, avoiding the
/// sub-colors of the kill set (all of which precede `v`). A triangle inside
/// a part would have its rightmost vertex `v` seeing an uncovered edge among
/// kept left-neighbors, which the cover rules out.
pub fn cleanup_to_triangle_free(g: &Graph, o: &VertexOrdering, coloring: &[u32], params: &PartitionParams) -> Result<Cleanup> {
    params.validate()?;
    check_coloring(g, coloring, params.ell)?;
    let mut ctx = EventContext::new(g, o, *params);
    let pending: usize = g.vertices().map(|v| ctx.violated(v, coloring).iter().filter(|&&x| x).count()).sum();
    if pending > 0 {
        return Err(Error::InvalidParam(format!("coloring still has {pending} bad events")));
    }

    let n = g.n();
    let mut kill_sets: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in g.vertices() {
        let mut s: Vec<u32> = ctx.bad_same_class(v, coloring).collect();
        let edges = ctx.good_same_class_edges(v, coloring);
        s.extend(greedy_cover(&edges));
        s.sort_unstable();
        kill_sets[v as usize] = s;
    }

    let mut subcolor = vec![u32::MAX; n];
    let mut used: Vec<bool> = Vec::new();
    for &v in &o.order {
        let s = &kill_sets[v as usize];
        used.clear();
        used.resize(s.len() + 1, false);
        for &u in s {
            debug_assert!(o.precedes(u, v));
            let c = subcolor[u as usize] as usize;
            if c < used.len() {
                used[c] = true;
            }
        }
        subcolor[v as usize] = used.iter().position(|&x| !x).expect("|S|+1 slots, |S| blocked") as u32;
    }

    let max_kill_set = kill_sets.iter().map(Vec::len).max().unwrap_or(0);
    let kill_set_bound = params.kappa_bad + params.mu;
    if max_kill_set as u64 > kill_set_bound {
        return Err(Error::Certification(format!(
            "kill set of size {max_kill_set} exceeds kappa_bad + mu = {kill_set_bound}"
        )));
    }

    let labels: BTreeSet<(u32, u32)> = g.vertices().map(|v| (coloring[v as usize], subcolor[v as usize])).collect();
    let ids: BTreeMap<(u32, u32), u32> = labels.into_iter().zip(0..).collect();
    let class_of: Vec<u32> = g.vertices().map(|v| ids[&(coloring[v as usize], subcolor[v as usize])]).collect();
    let k = ids.len();
    let certificates = certify_classes(g, &class_of, k);
    let partition = Partition { class_of, k, certificates };

    if let Some((c, _)) = partition.certificates.iter().enumerate().find(|(_, c)| c.triangle_count > 0) {
        let t = class_triangle(g, &partition.class_of, c as u32);
        return Err(Error::Certification(format!("class {c} contains triangle {t:?}")));
    }
    if let Some((c, cert)) = partition
        .certificates
        .iter()
        .enumerate()
        .find(|(_, c)| c.max_degree as u64 > params.part_degree_bound)
    {
        return Err(Error::Certification(format!(
            "class {c} has max degree {} > {}",
            cert.max_degree, params.part_degree_bound
        )));
    }
    if k as u128 > params.class_bound() {
        return Err(Error::Certification(format!(
            "{k} classes exceed ell*(kappa_bad+mu+1) = {}",
            params.class_bound()
        )));
    }
    Ok(Cleanup {
        partition,
        kill_sets,
        subcolor,
        max_kill_set,
        kill_set_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    pub k: usize,
    pub certificates: Vec<ClassCertificate>,
    pub max_part_degree: u32,
    pub degree_bound: u64,
    /// First class containing a triangle, with the triangle.
    pub triangle_witness: Option<(u32, [u32; 3])>,
    /// Classes whose max degree exceeds the bound.
    pub degree_violations: Vec<u32>,
    pub passed: bool,
}

/// Recomputes every class certificate from the graph.
pub fn verify_partition(g: &Graph, p: &Partition, degree_bound: u64) -> Result<PartitionReport> {
    if p.class_of.len() != g.n() {
        return Err(Error::NotCovering(format!("{} class ids for {} vertices", p.class_of.len(), g.n())));
    }
    if let Some((v, &c)) = p.class_of.iter().enumerate().find(|(_, &c)| c as usize >= p.k) {
        return Err(Error::NotCovering(format!("vertex {v} has class {c} outside [0, {})", p.k)));
    }
    let certificates = certify_classes(g, &p.class_of, p.k);
    let triangle_witness = certificates.iter().position(|c| c.triangle_count > 0).map(|c| {
        (
            c as u32,
            class_triangle(g, &p.class_of, c as u32).expect("certified triangle exists"),
        )
    });
    let degree_violations: Vec<u32> = certificates
        .iter()
        .enumerate()
        .filter(|(_, c)| c.max_degree as u64 > degree_bound)
        .map(|(i, _)| i as u32)
        .collect();
    let max_part_degree = certificates.iter().map(|c| c.max_degree).max().unwrap_or(0);
    let passed = triangle_witness.is_none() && degree_violations.is_empty();
    Ok(PartitionReport {
        k: p.k,
        certificates,
        max_part_degree,
        degree_bound,
        triangle_witness,
        degree_violations,
        passed,
    })
}
