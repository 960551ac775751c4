//! Proper colorings: per-part colorers and the partition-based pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::partition::{cleanup_to_triangle_free, moser_tardos_partition, Partition, PartitionParams};
use crate::rng::{stream, Tag};
use crate::turan::left_sparse_ordering;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub color_of: Vec<u32>,
    pub palette_size: usize,
}

impl Coloring {
    /// Renumbers colors densely in increasing order of the original ids.
    pub fn from_raw(raw: Vec<u32>) -> Self {
        let ids: BTreeMap<u32, u32> = raw.iter().copied().collect::<BTreeSet<_>>().into_iter().zip(0..).collect();
        let palette_size = ids.len();
        Coloring {
            color_of: raw.iter().map(|c| ids[c]).collect(),
            palette_size,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartColorerChoice {
    /// First fit along the reverse of a min-degree elimination order.
    GreedyDegeneracy,
    /// Most saturated vertex first, then higher degree, then lower id.
    Dsatur,
    /// Rounds of random tentative colors from `[Delta + 1]`, kept when no
    /// uncolored neighbor proposed the same color.
    RandomizedLocal,
}

impl PartColorerChoice {
    pub const ALL: [PartColorerChoice; 3] = [Self::GreedyDegeneracy, Self::Dsatur, Self::RandomizedLocal];

    pub fn name(self) -> &'static str {
        match self {
            Self::GreedyDegeneracy => "greedy_degeneracy",
            Self::Dsatur => "dsatur",
            Self::RandomizedLocal => "randomized_local",
        }
    }
}

impl fmt::Display for PartColorerChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PartColorerChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown strategy {s:?} (greedy_degeneracy, dsatur, randomized_local)")))
    }
}

fn first_free(g: &Graph, v: u32, color: &[u32], scratch: &mut Vec<bool>) -> u32 {
    scratch.clear();
    scratch.resize(g.degree(v) as usize + 1, false);
    for &w in g.neighbors(v) {
        let c = color[w as usize] as usize;
        if c < scratch.len() {
            scratch[c] = true;
        }
    }
    scratch.iter().position(|&x| !x).expect("deg + 1 slots") as u32
}

/// Repeatedly removes a minimum-degree vertex (lowest id on ties).
pub fn degeneracy_order(g: &Graph) -> Vec<u32> {
    let mut deg: Vec<u32> = g.vertices().map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(u32, u32)> = g.vertices().map(|v| (deg[v as usize], v)).collect();
    let mut order = Vec::with_capacity(g.n());
    let mut gone = vec![false; g.n()];
    while let Some((_, v)) = queue.pop_first() {
        gone[v as usize] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !gone[w as usize] {
                queue.remove(&(deg[w as usize], w));
                deg[w as usize] -= 1;
                queue.insert((deg[w as usize], w));
            }
        }
    }
    order
}

fn greedy_degeneracy(g: &Graph) -> Vec<u32> {
    let mut color = vec![u32::MAX; g.n()];
    let mut scratch = Vec::new();
    for v in degeneracy_order(g).into_iter().rev() {
        color[v as usize] = first_free(g, v, &color, &mut scratch);
    }
    color
}

fn dsatur(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let mut color = vec![u32::MAX; n];
    let mut seen: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    // key: (saturation, degree, Reverse(id)), largest first
    let mut queue: BTreeSet<(usize, u32, std::cmp::Reverse<u32>)> = g.vertices().map(|v| (0, g.degree(v), std::cmp::Reverse(v))).collect();
    let mut scratch = Vec::new();
    while let Some((_, _, std::cmp::Reverse(v))) = queue.pop_last() {
        let c = first_free(g, v, &color, &mut scratch);
        color[v as usize] = c;
        for &w in g.neighbors(v) {
            if color[w as usize] == u32::MAX && !seen[w as usize].contains(&c) {
                queue.remove(&(seen[w as usize].len(), g.degree(w), std::cmp::Reverse(w)));
                seen[w as usize].insert(c);
                queue.insert((seen[w as usize].len(), g.degree(w), std::cmp::Reverse(w)));
            }
        }
    }
    color
}

const LOCAL_ROUNDS: usize = 64;

fn randomized_local<R: Rng>(g: &Graph, rng: &mut R) -> Vec<u32> {
    let palette = g.max_degree() + 1;
    let mut color = vec![u32::MAX; g.n()];
    let mut proposal = vec![u32::MAX; g.n()];
    let mut pending: Vec<u32> = g.vertices().collect();
    let mut free = Vec::new();
    for _ in 0..LOCAL_ROUNDS {
        if pending.is_empty() {
            break;
        }
        for &v in &pending {
            free.clear();
            free.extend((0..palette).filter(|c| g.neighbors(v).iter().all(|&w| color[w as usize] != *c)));
            proposal[v as usize] = *free.get(rng.random_range(0..free.len())).expect("palette exceeds degree");
        }
        let keep: Vec<bool> = pending
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .all(|&w| color[w as usize] != u32::MAX || proposal[w as usize] != proposal[v as usize])
            })
            .collect();
        for (&v, &k) in pending.iter().zip(&keep) {
            if k {
                color[v as usize] = proposal[v as usize];
            }
        }
        for &v in &pending {
            proposal[v as usize] = u32::MAX;
        }
        pending = pending.into_iter().zip(keep).filter(|&(_, k)| !k).map(|(v, _)| v).collect();
    }
    // leftovers (vanishingly rare) take first fit in a random order
    pending.shuffle(rng);
    let mut scratch = Vec::new();
    for v in pending {
        color[v as usize] = first_free(g, v, &color, &mut scratch);
    }
    color
}

/// Proper coloring of `g` with at most `Delta(g) + 1` colors.
pub fn color_part<R: Rng>(g: &Graph, choice: PartColorerChoice, rng: &mut R) -> Coloring {
    let raw = match choice {
        PartColorerChoice::GreedyDegeneracy => greedy_degeneracy(g),
        PartColorerChoice::Dsatur => dsatur(g),
        PartColorerChoice::RandomizedLocal => randomized_local(g, rng),
    };
    Coloring::from_raw(raw)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineColoring {
    pub coloring: Coloring,
    pub partition: Partition,
    pub resamples: u64,
    pub max_part_degree: u32,
    /// `k * (1 + max part degree)`.
    pub palette_bound: u64,
    /// First color of each class.
    pub offsets: Vec<u32>,
}

/// Colors `g` by splitting it into triangle-free parts and giving each part
/// its own block of colors.
///
/// Classes are colored in parallel; each class draws its colorer seed from
/// `rng` in class order first, so the result does not depend on scheduling.
pub fn color_kttt_free<R: Rng>(g: &Graph, params: &PartitionParams, choice: PartColorerChoice, rng: &mut R) -> Result<PipelineColoring> {
    let order = left_sparse_ordering(g);
    let mt = moser_tardos_partition(g, &order, params, rng)?;
    let cleanup = cleanup_to_triangle_free(g, &order, &mt.coloring, params)?;
    let partition = cleanup.partition;
    let classes = partition.classes();
    let seeds: Vec<u64> = classes.iter().map(|_| rng.random()).collect();
    let parts: Vec<Coloring> = classes
        .par_iter()
        .zip(seeds.par_iter())
        .enumerate()
        .map(|(c, (members, &seed))| {
            let sub = g.induced(&VertexSet::from_iter(g.n(), members.iter().copied()));
            color_part(&sub.graph, choice, &mut stream(seed, Tag::ColorPart, c as u64))
        })
        .collect();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut next = 0u32;
    for p in &parts {
        offsets.push(next);
        next += p.palette_size as u32;
    }
    let mut color_of = vec![0u32; g.n()];
    for ((members, part), &off) in classes.iter().zip(&parts).zip(&offsets) {
        for (&v, &c) in members.iter().zip(&part.color_of) {
            color_of[v as usize] = off + c;
        }
    }
    let coloring = Coloring {
        color_of,
        palette_size: next as usize,
    };
    let report = verify_coloring(g, &coloring)?;
    if !report.passed {
        return Err(Error::Certification(format!(
            "pipeline coloring has monochromatic edge {:?}",
            report.monochromatic[0]
        )));
    }
    let max_part_degree = partition.certificates.iter().map(|c| c.max_degree).max().unwrap_or(0);
    let palette_bound = partition.k as u64 * (1 + max_part_degree as u64);
    Ok(PipelineColoring {
        coloring,
        partition,
        resamples: mt.resamples,
        max_part_degree,
        palette_bound,
        offsets,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringReport {
    pub passed: bool,
    pub monochromatic: Vec<(u32, u32)>,
}

/// Full edge scan for monochromatic edges; colors must lie in `[palette_size]`.
pub fn verify_coloring(g: &Graph, c: &Coloring) -> Result<ColoringReport> {
    if c.color_of.len() != g.n() {
        return Err(Error::NotCovering(format!("{} colors for {} vertices", c.color_of.len(), g.n())));
    }
    if let Some((v, &x)) = c.color_of.iter().enumerate().find(|(_, &x)| x as usize >= c.palette_size) {
        return Err(Error::NotCovering(format!(
            "vertex {v} has color {x} outside palette of size {}",
            c.palette_size
        )));
    }
    let monochromatic: Vec<(u32, u32)> = g
        .edges()
        .filter(|&(u, v)| c.color_of[u as usize] == c.color_of[v as usize])
        .collect();
    Ok(ColoringReport {
        passed: monochromatic.is_empty(),
        monochromatic,
    })
}
