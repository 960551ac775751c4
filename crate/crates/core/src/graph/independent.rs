use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Graph, VertexSet};
use crate::error::{Error, Result};

pub const DEFAULT_MIS_NODE_CAP: usize = 40;

pub fn is_independent(g: &Graph, s: &VertexSet) -> bool {
    first_internal_edge(g, s).is_none()
}

/// An edge with both ends in `s`, if any (lexicographically smallest).
pub fn first_internal_edge(g: &Graph, s: &VertexSet) -> Option<(u32, u32)> {
    s.iter()
        .find_map(|u| g.neighbors(u).iter().find(|&&v| v > u && s.contains(v)).map(|&v| (u, v)))
}

/// Min-degree greedy: take a minimum-degree vertex of the residual graph
/// (lowest id on ties) and delete its closed neighborhood.
pub fn greedy_independent_set(g: &Graph) -> VertexSet {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<u32> = g.vertices().map(|v| g.degree(v)).collect();
    // one lazy min-heap of ids per degree; stale entries are skipped on pop
    let mut buckets: Vec<BinaryHeap<Reverse<u32>>> = vec![BinaryHeap::new(); g.max_degree() as usize + 1];
    for v in g.vertices() {
        buckets[deg[v as usize] as usize].push(Reverse(v));
    }
    let mut low = 0usize;
    let mut out = VertexSet::new(n);
    while low < buckets.len() {
        let Some(Reverse(v)) = buckets[low].pop() else {
            low += 1;
            continue;
        };
        if !alive[v as usize] || deg[v as usize] as usize != low {
            continue;
        }
        out.insert(v);
        alive[v as usize] = false;
        for &w in g.neighbors(v) {
            if !alive[w as usize] {
                continue;
            }
            alive[w as usize] = false;
            for &x in g.neighbors(w) {
                if alive[x as usize] {
                    deg[x as usize] -= 1;
                    let d = deg[x as usize] as usize;
                    buckets[d].push(Reverse(x));
                    low = low.min(d);
                }
            }
        }
    }
    out
}

/// Deletes a maximum-degree vertex (lowest id on ties) while edges remain.
/// Every deletion removes at least one edge, so the result has at least `n - m` vertices.
pub fn deletion_greedy_independent_set(g: &Graph) -> VertexSet {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<u32> = g.vertices().map(|v| g.degree(v)).collect();
    let mut heap: BinaryHeap<(u32, Reverse<u32>)> = g.vertices().map(|v| (deg[v as usize], Reverse(v))).collect();
    while let Some((d, Reverse(v))) = heap.pop() {
        if d == 0 {
            break;
        }
        if !alive[v as usize] || deg[v as usize] != d {
            continue;
        }
        alive[v as usize] = false;
        for &w in g.neighbors(v) {
            if alive[w as usize] {
                deg[w as usize] -= 1;
                heap.push((deg[w as usize], Reverse(w)));
            }
        }
    }
    VertexSet::from_iter(n, g.vertices().filter(|&v| alive[v as usize]))
}

/// Maximum independent set by branch and bound, for graphs with at most
/// `node_cap` (and at most 64) vertices.
pub fn exact_mis(g: &Graph, node_cap: usize) -> Result<VertexSet> {
    let n = g.n();
    let cap = node_cap.min(64);
    if n > cap {
        return Err(Error::InstanceTooLarge { n, cap });
    }
    let adj: Vec<u64> = g.vertices().map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u)).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = MisSearch {
        adj: &adj,
        best: 0,
        best_size: 0,
    };
    search.run(all, 0);
    let out = VertexSet::from_iter(n, (0..n as u32).filter(|&v| search.best >> v & 1 == 1));
    debug_assert!(is_independent(g, &out));
    Ok(out)
}

struct MisSearch<'a> {
    adj: &'a [u64],
    best: u64,
    best_size: u32,
}

impl MisSearch<'_> {
    fn run(&mut self, mut pool: u64, mut chosen: u64) {
        // vertices of residual degree <= 1 belong to some maximum independent set
        'reduce: loop {
            let mut rest = pool;
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                if (self.adj[v as usize] & pool).count_ones() <= 1 {
                    chosen |= 1 << v;
                    pool &= !(self.adj[v as usize] | 1 << v);
                    continue 'reduce;
                }
            }
            break;
        }
        let size = chosen.count_ones();
        if size + pool.count_ones() <= self.best_size {
            return;
        }
        if pool == 0 {
            self.best = chosen;
            self.best_size = size;
            return;
        }
        let mut pick = 0u32;
        let mut pick_deg = 0u32;
        let mut rest = pool;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let d = (self.adj[v as usize] & pool).count_ones();
            if d > pick_deg {
                pick = v;
                pick_deg = d;
            }
        }
        self.run(pool & !(self.adj[pick as usize] | 1 << pick), chosen | 1 << pick);
        self.run(pool & !(1 << pick), chosen);
    }
}
