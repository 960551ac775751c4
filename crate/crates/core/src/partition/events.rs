use serde::{Deserialize, Serialize};

use super::PartitionParams;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::turan::VertexOrdering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventKind {
    /// Too many same-class neighbors.
    A,
    /// Too many same-class bad left-neighbors.
    B,
    /// Same-class good left-neighbors span too many edges.
    C,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    Vertices(Vec<u32>),
    Edges(Vec<(u32, u32)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadEvent {
    pub kind: EventKind,
    pub vertex: u32,
    pub witness: Witness,
}

/// Left-neighbors `u` of `v` with `|N(u) ∩ N_L(v)| >= threshold`.
pub fn classify_left_bad(g: &Graph, o: &VertexOrdering, v: u32, threshold: u64) -> VertexSet {
    let left: Vec<u32> = o.left_neighbors(g, v).collect();
    let mut out = VertexSet::new(g.n());
    for &u in &left {
        let codeg = crate::graph::count::intersection_size(g.neighbors(u), &left) as u64;
        if codeg >= threshold {
            out.insert(u);
        }
    }
    out
}

/// Precomputed left neighborhoods with bad/good labels; events are then
/// evaluated against any coloring.
pub(crate) struct EventContext<'a> {
    pub g: &'a Graph,
    pub params: PartitionParams,
    /// `N_L(v)` sorted by id, paired with the bad flag.
    pub left: Vec<Vec<(u32, bool)>>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl<'a> EventContext<'a> {
    pub fn new(g: &'a Graph, o: &VertexOrdering, params: PartitionParams) -> Self {
        let left = g
            .vertices()
            .map(|v| {
                let nl: Vec<u32> = o.left_neighbors(g, v).collect();
                nl.iter()
                    .map(|&u| {
                        let codeg = crate::graph::count::intersection_size(g.neighbors(u), &nl) as u64;
                        (u, codeg >= params.bad_threshold)
                    })
                    .collect()
            })
            .collect();
        EventContext {
            g,
            params,
            left,
            stamp: vec![0; g.n()],
            epoch: 0,
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        self.epoch
    }

    fn same_class_neighbors<'b>(&'b self, v: u32, coloring: &'b [u32]) -> impl Iterator<Item = u32> + 'b {
        let c = coloring[v as usize];
        self.g.neighbors(v).iter().copied().filter(move |&u| coloring[u as usize] == c)
    }

    /// Edges among same-class good left-neighbors of `v`, each `(a, b)` with `a < b`.
    pub fn good_same_class_edges(&mut self, v: u32, coloring: &[u32]) -> Vec<(u32, u32)> {
        let c = coloring[v as usize];
        let epoch = self.next_epoch();
        let members: Vec<u32> = self.left[v as usize]
            .iter()
            .filter(|&&(u, bad)| !bad && coloring[u as usize] == c)
            .map(|&(u, _)| u)
            .collect();
        for &u in &members {
            self.stamp[u as usize] = epoch;
        }
        let mut edges = Vec::new();
        for &u in &members {
            for &w in self.g.neighbors(u) {
                if w > u && self.stamp[w as usize] == epoch {
                    edges.push((u, w));
                }
            }
        }
        edges
    }

    fn good_same_class_edge_count(&mut self, v: u32, coloring: &[u32]) -> u64 {
        let c = coloring[v as usize];
        let epoch = self.next_epoch();
        let mut any = false;
        for &(u, bad) in &self.left[v as usize] {
            if !bad && coloring[u as usize] == c {
                self.stamp[u as usize] = epoch;
                any = true;
            }
        }
        if !any {
            return 0;
        }
        let mut twice = 0u64;
        for &(u, bad) in &self.left[v as usize] {
            if !bad && coloring[u as usize] == c {
                twice += self.g.neighbors(u).iter().filter(|&&w| self.stamp[w as usize] == epoch).count() as u64;
            }
        }
        twice / 2
    }

    pub fn bad_same_class<'b>(&'b self, v: u32, coloring: &'b [u32]) -> impl Iterator<Item = u32> + 'b {
        let c = coloring[v as usize];
        self.left[v as usize]
            .iter()
            .filter(move |&&(u, bad)| bad && coloring[u as usize] == c)
            .map(|&(u, _)| u)
    }

    /// Which of `A_v`, `B_v`, `C_v` hold.
    pub fn violated(&mut self, v: u32, coloring: &[u32]) -> [bool; 3] {
        let c = coloring[v as usize];
        let a = self.g.neighbors(v).iter().filter(|&&u| coloring[u as usize] == c).count() as u64 > self.params.part_degree_bound;
        let bad = self.left[v as usize]
            .iter()
            .filter(|&&(u, bad)| bad && coloring[u as usize] == c)
            .count() as u64;
        let b = bad > self.params.kappa_bad;
        let cc = self.good_same_class_edge_count(v, coloring) >= self.params.mu;
        [a, b, cc]
    }

    pub fn events_at(&mut self, v: u32, coloring: &[u32]) -> Vec<BadEvent> {
        let flags = self.violated(v, coloring);
        let mut out = Vec::new();
        if flags[0] {
            out.push(BadEvent {
                kind: EventKind::A,
                vertex: v,
                witness: Witness::Vertices(self.same_class_neighbors(v, coloring).collect()),
            });
        }
        if flags[1] {
            out.push(BadEvent {
                kind: EventKind::B,
                vertex: v,
                witness: Witness::Vertices(self.bad_same_class(v, coloring).collect()),
            });
        }
        if flags[2] {
            out.push(BadEvent {
                kind: EventKind::C,
                vertex: v,
                witness: Witness::Edges(self.good_same_class_edges(v, coloring)),
            });
        }
        out
    }
}

pub(crate) fn check_coloring(g: &Graph, coloring: &[u32], ell: u64) -> Result<()> {
    if coloring.len() != g.n() {
        return Err(Error::InvalidParam(format!(
            "coloring has {} entries for {} vertices",
            coloring.len(),
            g.n()
        )));
    }
    if let Some((v, &c)) = coloring.iter().enumerate().find(|(_, &c)| c as u64 >= ell) {
        return Err(Error::InvalidParam(format!("vertex {v} has class {c} outside [0, {ell})")));
    }
    Ok(())
}

/// All violated events, ordered by `(vertex, kind)`.
pub fn find_bad_events(g: &Graph, o: &VertexOrdering, coloring: &[u32], params: &PartitionParams) -> Result<Vec<BadEvent>> {
    check_coloring(g, coloring, params.ell)?;
    let mut ctx = EventContext::new(g, o, *params);
    Ok(g.vertices().flat_map(|v| ctx.events_at(v, coloring)).collect())
}
