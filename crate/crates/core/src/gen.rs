//! Seeded instance generators.
//!
//! Every generator is a pure function of its parameters and seed. Random
//! families draw from [`crate::rng::stream`] keyed per row, so output is
//! identical for any thread count.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng::{stream, Tag};

/// Small deterministic graphs.
pub mod classic {
    use crate::graph::Graph;

    fn build(n: usize, pairs: Vec<(u32, u32)>) -> Graph {
        Graph::from_canonical_pairs(n, &pairs)
    }

    pub fn complete(n: usize) -> Graph {
        let n32 = n as u32;
        build(n, (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v))).collect())
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        build(
            n,
            (0..n as u32)
                .map(|u| (u, (u + 1) % n as u32))
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect(),
        )
    }

    pub fn path(n: usize) -> Graph {
        build(n, (1..n as u32).map(|u| (u - 1, u)).collect())
    }

    /// `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Graph {
        build(leaves + 1, (1..=leaves as u32).map(|v| (0, v)).collect())
    }

    /// `K_{a,b}` with left side `0..a`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let (a, b) = (a as u32, b as u32);
        build((a + b) as usize, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect())
    }

    pub fn petersen() -> Graph {
        let mut pairs = Vec::new();
        for i in 0..5u32 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((5 + i, 5 + (i + 2) % 5));
        }
        build(10, pairs)
    }

    /// `copies` vertex-disjoint copies of `g`; copy `c` occupies ids `c*n..(c+1)*n`.
    pub fn disjoint_union(g: &Graph, copies: usize) -> Graph {
        let n = g.n() as u32;
        let pairs = (0..copies as u32)
            .flat_map(|c| g.edges().map(move |(u, v)| (c * n + u, c * n + v)))
            .collect();
        build(g.n() * copies, pairs)
    }
}

fn geometric_row(n: usize, u: u32, p: f64, seed: u64, tag: Tag, lo: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    if p <= 0.0 {
        return out;
    }
    if p >= 1.0 {
        return (lo.max(u + 1)..n as u32).map(|v| (u, v)).collect();
    }
    let mut rng = stream(seed, tag, u as u64);
    let log_q = (-p).ln_1p();
    let mut v = lo.max(u + 1) as u64;
    loop {
        // 1 - U lies in (0, 1]
        let r: f64 = 1.0 - rng.random::<f64>();
        let skip = (r.ln() / log_q).floor();
        if !skip.is_finite() || v as f64 + skip >= n as f64 {
            break;
        }
        v += skip as u64;
        if v >= n as u64 {
            break;
        }
        out.push((u, v as u32));
        v += 1;
    }
    out
}

/// Erdős–Rényi `G(n, p)`; row `u` draws its forward neighbors from its own stream.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!("p = {p} outside [0, 1]")));
    }
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .into_par_iter()
        .flat_map_iter(|u| geometric_row(n, u, p, seed, Tag::Gnp, 0))
        .collect();
    Ok(Graph::from_canonical_pairs(n, &pairs))
}

/// Random bipartite graph with sides `0..a` and `a..a+b`, each cross pair an edge with probability `p`.
pub fn random_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!("p = {p} outside [0, 1]")));
    }
    let n = a + b;
    let pairs: Vec<(u32, u32)> = (0..a as u32)
        .into_par_iter()
        .flat_map_iter(|u| geometric_row(n, u, p, seed, Tag::Bipartite, a as u32))
        .collect();
    Ok(Graph::from_canonical_pairs(n, &pairs))
}

const REGULAR_MAX_ATTEMPTS: u32 = 1_000;

/// Uniform-ish random `d`-regular graph from the pairing model.
///
/// Points are paired one at a time, redrawing any pair that would create a
/// loop or a repeated edge; if no admissible pair is left the whole pairing
/// is discarded and restarted.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if !(n * d).is_multiple_of(2) || (d >= n && d > 0) {
        return Err(Error::InvalidParam(format!(
            "random_regular needs n*d even and d < n (n = {n}, d = {d})"
        )));
    }
    let mut rng = stream(seed, Tag::Regular, 0);
    'attempt: for _ in 0..REGULAR_MAX_ATTEMPTS {
        let mut points: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut adj: Vec<Vec<u32>> = vec![Vec::with_capacity(d); n];
        let mut pairs = Vec::with_capacity(n * d / 2);
        while !points.is_empty() {
            let mut placed = false;
            for _ in 0..64 {
                let i = rng.random_range(0..points.len());
                let j = rng.random_range(0..points.len());
                let (u, v) = (points[i], points[j]);
                if i != j && u != v && !adj[u as usize].contains(&v) {
                    let (hi, lo) = (i.max(j), i.min(j));
                    points.swap_remove(hi);
                    points.swap_remove(lo);
                    adj[u as usize].push(v);
                    adj[v as usize].push(u);
                    pairs.push((u.min(v), u.max(v)));
                    placed = true;
                    break;
                }
            }
            if !placed {
                let admissible = (0..points.len())
                    .any(|i| (i + 1..points.len()).any(|j| points[i] != points[j] && !adj[points[i] as usize].contains(&points[j])));
                if !admissible {
                    continue 'attempt;
                }
            }
        }
        return Ok(Graph::from_canonical_pairs(n, &pairs));
    }
    Err(Error::RetryBudgetExhausted {
        attempts: REGULAR_MAX_ATTEMPTS,
    })
}

/// Replaces every vertex by an independent blob of `blob` vertices and joins
/// the blobs of adjacent vertices completely. Vertex `(b, k)` gets id `b*blob + k`.
pub fn blowup(base: &Graph, blob: usize) -> Graph {
    assert!(blob >= 1, "blob size must be at least 1");
    let s = blob as u32;
    let pairs: Vec<(u32, u32)> = base
        .edges()
        .flat_map(|(a, b)| (0..s).flat_map(move |i| (0..s).map(move |j| (a * s + i, b * s + j))))
        .collect();
    Graph::from_canonical_pairs(base.n() * blob, &pairs)
}

/// `G(n, p)` with one edge deleted from every triangle still present when it is
/// visited; triangles are visited as `a < b < c` in lexicographic order and
/// lose their lowest edge `{a, b}`.
pub fn triangle_scrubbed_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let g = gnp(n, p, seed)?;
    Ok(scrub_triangles(&g))
}

pub fn scrub_triangles(g: &Graph) -> Graph {
    let mut adj: Vec<Vec<u32>> = g.vertices().map(|v| g.neighbors(v).to_vec()).collect();
    let has = |adj: &Vec<Vec<u32>>, u: u32, v: u32| adj[u as usize].binary_search(&v).is_ok();
    for a in g.vertices() {
        for &b in g.neighbors(a).iter().filter(|&&b| b > a) {
            for &c in g.neighbors(b).iter().filter(|&&c| c > b) {
                if has(&adj, a, b) && has(&adj, b, c) && has(&adj, a, c) {
                    let pos = adj[a as usize].binary_search(&b).unwrap();
                    adj[a as usize].remove(pos);
                    let pos = adj[b as usize].binary_search(&a).unwrap();
                    adj[b as usize].remove(pos);
                }
            }
        }
    }
    let pairs: Vec<(u32, u32)> = g
        .vertices()
        .flat_map(|u| adj[u as usize].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
        .collect::<Vec<_>>();
    Graph::from_canonical_pairs(g.n(), &pairs)
}

/// Instance family with its parameters, parsed from the compact form
/// `family:key=value,key=value`.
///
/// | family | keys |
/// |---|---|
/// | `gnp` | `n`, and `p` or `d` (then `p = d/n`) |
/// | `regular` | `n`, `d` |
/// | `bipartite` | `a`, `b`, and `p` or `d` (then `p = d/max(a,b)`) |
/// | `blowup_k3`, `blowup_c5` | `s` (blob size), optional `copies` |
/// | `scrubbed` | as `gnp` |
///
/// Every family accepts an optional `seed` overriding the run seed, and
/// `copies` (alias `scale`) for a disjoint union of independent copies of
/// the deterministic families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Gnp { n: usize, p: f64 },
    RandomRegular { n: usize, d: usize },
    Bipartite { a: usize, b: usize, p: f64 },
    BlowupK3 { s: usize, copies: usize },
    BlowupC5 { s: usize, copies: usize },
    TriangleScrubbedGnp { n: usize, p: f64 },
}

impl GenSpec {
    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Gnp { .. } => "gnp",
            Family::RandomRegular { .. } => "regular",
            Family::Bipartite { .. } => "bipartite",
            Family::BlowupK3 { .. } => "blowup_k3",
            Family::BlowupC5 { .. } => "blowup_c5",
            Family::TriangleScrubbedGnp { .. } => "scrubbed",
        }
    }

    /// Builds the instance; `run_seed` is used unless the spec pins its own seed.
    pub fn generate(&self, run_seed: u64) -> Result<Graph> {
        let seed = self.seed.unwrap_or(run_seed);
        match self.family {
            Family::Gnp { n, p } => gnp(n, p, seed),
            Family::RandomRegular { n, d } => random_regular(n, d, seed),
            Family::Bipartite { a, b, p } => random_bipartite(a, b, p, seed),
            Family::BlowupK3 { s, copies } => Ok(classic::disjoint_union(&blowup(&classic::complete(3), s), copies)),
            Family::BlowupC5 { s, copies } => Ok(classic::disjoint_union(&blowup(&classic::cycle(5), s), copies)),
            Family::TriangleScrubbedGnp { n, p } => triangle_scrubbed_gnp(n, p, seed),
        }
    }
}

impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParam(format!("gen spec {s:?}: {msg}"));
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = std::collections::BTreeMap::new();
        for item in rest.split(',').filter(|i| !i.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {item:?}")))?;
            let v: f64 = v.trim().parse().map_err(|_| bad(format!("value of {k} is not a number")))?;
            kv.insert(k.trim().to_string(), v);
        }
        let mut take = |k: &str| kv.remove(k);
        let int = |x: f64, k: &str| -> Result<usize> {
            if x < 0.0 || x.fract() != 0.0 {
                Err(bad(format!("{k} must be a non-negative integer")))
            } else {
                Ok(x as usize)
            }
        };
        let seed = take("seed").map(|x| int(x, "seed")).transpose()?.map(|x| x as u64);
        let copies = take("copies")
            .or_else(|| take("scale"))
            .map(|x| int(x, "copies"))
            .transpose()?
            .unwrap_or(1);
        let mut need = |k: &str| take(k).ok_or_else(|| bad(format!("missing {k}")));
        let family = match family.trim() {
            "gnp" | "scrubbed" | "triangle_scrubbed_gnp" => {
                let n = int(need("n")?, "n")?;
                let p = match need("p") {
                    Ok(p) => p,
                    Err(_) => need("d")? / n.max(1) as f64,
                };
                if family.trim() == "gnp" {
                    Family::Gnp { n, p }
                } else {
                    Family::TriangleScrubbedGnp { n, p }
                }
            }
            "regular" | "random_regular" => Family::RandomRegular {
                n: int(need("n")?, "n")?,
                d: int(need("d")?, "d")?,
            },
            "bipartite" => {
                let a = int(need("a")?, "a")?;
                let b = int(need("b")?, "b")?;
                let p = match need("p") {
                    Ok(p) => p,
                    Err(_) => need("d")? / a.max(b).max(1) as f64,
                };
                Family::Bipartite { a, b, p }
            }
            "blowup_k3" => Family::BlowupK3 {
                s: int(need("s")?, "s")?,
                copies,
            },
            "blowup_c5" => Family::BlowupC5 {
                s: int(need("s")?, "s")?,
                copies,
            },
            other => return Err(bad(format!("unknown family {other:?}"))),
        };
        if let Some(k) = kv.keys().next() {
            return Err(bad(format!("unknown key {k:?}")));
        }
        if let Family::BlowupK3 { s, .. } | Family::BlowupC5 { s, .. } = family {
            if s == 0 {
                return Err(bad("blob size s must be at least 1".into()));
            }
        }
        Ok(GenSpec { family, seed })
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Gnp { n, p } => write!(f, "gnp:n={n},p={p}")?,
            Family::RandomRegular { n, d } => write!(f, "regular:n={n},d={d}")?,
            Family::Bipartite { a, b, p } => write!(f, "bipartite:a={a},b={b},p={p}")?,
            Family::BlowupK3 { s, copies } => write!(f, "blowup_k3:s={s},copies={copies}")?,
            Family::BlowupC5 { s, copies } => write!(f, "blowup_c5:s={s},copies={copies}")?,
            Family::TriangleScrubbedGnp { n, p } => write!(f, "scrubbed:n={n},p={p}")?,
        }
        if let Some(seed) = self.seed {
            write!(f, ",seed={seed}")?;
        }
        Ok(())
    }
}

/// Vertex set of blob `b` in a blow-up with blob size `s`.
pub fn blob_vertices(n: usize, b: u32, s: usize) -> VertexSet {
    VertexSet::from_iter(n, (0..s as u32).map(|k| b * s as u32 + k))
}
