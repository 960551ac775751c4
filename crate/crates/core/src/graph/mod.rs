//! Immutable undirected simple graphs in compressed adjacency form.
//!
//! Vertices are `u32` ids in `0..n`. Every neighbor slice is strictly
//! increasing, adjacency is symmetric, and there are no loops or parallel
//! edges. Vertex deletion is expressed by building an induced subgraph.

pub(crate) mod count;
mod independent;
mod kttt;
mod vertex_set;

pub use count::{common_neighbor_count, triangle_count, triangles_per_vertex, triangles_through};
pub use independent::{
    deletion_greedy_independent_set, exact_mis, first_internal_edge, greedy_independent_set, is_independent, DEFAULT_MIS_NODE_CAP,
};
pub use kttt::contains_kttt;
pub use vertex_set::VertexSet;

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

/// Maximum and average degree. The average is kept as the exact ratio `2m / n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeStats {
    pub max: u32,
    pub twice_m: u64,
    pub n: usize,
}

impl DegreeStats {
    pub fn avg(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.twice_m as f64 / self.n as f64
        }
    }
}

/// Induced subgraph with the map from new ids back to the parent's ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelabeledSubgraph {
    pub graph: Graph,
    pub to_parent: Vec<u32>,
}

impl RelabeledSubgraph {
    /// The whole graph, relabeled by the identity.
    pub fn identity(graph: Graph) -> Self {
        let to_parent = (0..graph.n() as u32).collect();
        RelabeledSubgraph { graph, to_parent }
    }

    /// Maps a set of local ids to a set of parent ids over `parent_n`.
    pub fn lift(&self, local: &VertexSet, parent_n: usize) -> VertexSet {
        VertexSet::from_iter(parent_n, local.iter().map(|v| self.to_parent[v as usize]))
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            adj: Vec::new(),
        }
    }

    /// Builds a graph from undirected edges, rejecting loops, out-of-range ids and
    /// duplicates. Errors carry the 1-based position of the offending edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let numbered = edges.into_iter().enumerate().map(|(i, (u, v))| (i + 1, u as u64, v as u64));
        Self::build(n, numbered)
    }

    fn build<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, u64, u64)>,
    {
        let mut arcs: Vec<(u32, u32, usize)> = Vec::new();
        for (line, u, v) in edges {
            for id in [u, v] {
                if id >= n as u64 {
                    return Err(Error::OutOfRange { line, id, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { line, vertex: u as u32 });
            }
            let (a, b) = if u < v { (u as u32, v as u32) } else { (v as u32, u as u32) };
            arcs.push((a, b, line));
        }
        arcs.sort_unstable();
        for w in arcs.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::DuplicateEdge {
                    line: w[0].2.max(w[1].2),
                    u: w[0].0,
                    v: w[0].1,
                });
            }
        }
        let pairs: Vec<(u32, u32)> = arcs.into_iter().map(|(a, b, _)| (a, b)).collect();
        Ok(Self::from_canonical_pairs(n, &pairs))
    }

    /// `pairs` must be distinct, loop-free and in range; orientation is irrelevant.
    pub(crate) fn from_canonical_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut deg = vec![0usize; n];
        for &(a, b) in pairs {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut adj = vec![0u32; offsets[n]];
        for &(a, b) in pairs {
            adj[fill[a as usize]] = b;
            fill[a as usize] += 1;
            adj[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        for v in 0..n {
            adj[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { offsets, adj }
    }

    /// Parses the edge-list interchange format: a header line `n m` followed by
    /// exactly `m` lines `u v`. Blank lines are ignored.
    pub fn from_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut last_line = 0;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let (a, b) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected two integers, got {trimmed:?}"),
                    });
                }
            };
            let parse = |s: &str| {
                s.parse::<u64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("not a non-negative integer: {s:?}"),
                })
            };
            let (a, b) = (parse(a)?, parse(b)?);
            match header {
                None => header = Some((a as usize, b as usize)),
                Some((_, m)) => {
                    if edges.len() == m {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("more than the {m} declared edges"),
                        });
                    }
                    edges.push((line_no, a, b));
                }
            }
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: last_line.max(1),
            msg: "missing header `n m`".into(),
        })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: last_line.max(1),
                msg: format!("declared {m} edges, found {}", edges.len()),
            });
        }
        Self::build(n, edges)
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        Self::from_edge_list(text.as_bytes())
    }

    /// Writes the canonical edge list: header, then edges `u v` with `u < v`
    /// in lexicographic order.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n(), self.m())?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.adj.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    #[inline]
    pub fn degree(&self, v: u32) -> u32 {
        (self.offsets[v as usize + 1] - self.offsets[v as usize]) as u32
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<u32> {
        0..self.n() as u32
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.vertices()
            .flat_map(move |u| self.neighbors(u).iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn max_degree(&self) -> u32 {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn avg_degree(&self) -> f64 {
        self.degrees().avg()
    }

    pub fn degrees(&self) -> DegreeStats {
        DegreeStats {
            max: self.max_degree(),
            twice_m: self.adj.len() as u64,
            n: self.n(),
        }
    }

    /// Subgraph induced by `s`, relabeled densely in increasing id order.
    pub fn induced(&self, s: &VertexSet) -> RelabeledSubgraph {
        assert!(s.universe() <= self.n() || s.iter().all(|v| (v as usize) < self.n()));
        let to_parent: Vec<u32> = s.iter().collect();
        let mut local = vec![u32::MAX; self.n()];
        for (i, &v) in to_parent.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut offsets = Vec::with_capacity(to_parent.len() + 1);
        offsets.push(0);
        let mut adj = Vec::new();
        for &v in &to_parent {
            // parent neighbor order is increasing and the relabeling is monotone
            adj.extend(
                self.neighbors(v)
                    .iter()
                    .filter(|&&u| local[u as usize] != u32::MAX)
                    .map(|&u| local[u as usize]),
            );
            offsets.push(adj.len());
        }
        RelabeledSubgraph {
            graph: Graph { offsets, adj },
            to_parent,
        }
    }

    /// Checks the structural invariants. Used by tests and debug assertions.
    pub fn check_invariants(&self) -> bool {
        if self.offsets.first() != Some(&0) || *self.offsets.last().unwrap() != self.adj.len() || !self.adj.len().is_multiple_of(2) {
            return false;
        }
        self.vertices().all(|v| {
            let nb = self.neighbors(v);
            nb.windows(2).all(|w| w[0] < w[1]) && nb.iter().all(|&u| (u as usize) < self.n() && u != v && self.has_edge(u, v))
        })
    }
}
