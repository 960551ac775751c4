//! Alternating cleaning and nibble steps producing a large independent set.
//!
//! Each iteration either deletes a vertex of degree above `(1 + eps/10)`
//! times the current average degree, or runs one nibble step with
//! `p = kappa / D`. The loop stops when the average degree is small (T1),
//! the cleaning ratio `R` is large (T2), or the nibble budget is spent (T3).

mod step;
mod trace;

pub use step::{
    cleaning_fires, cleaning_step, equalizing_probability, expected_residual_edges, expected_survivors, iset_step, IsetStats,
    IsetStepResult,
};
pub use trace::{
    check_cleaning_inequalities, CleaningCheck, CleaningReport, NibbleDetail, NibbleTrace, StepDetail, StepKind, StopReason, TraceRecord,
    TraceSummary,
};

use std::cmp::Reverse;
use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{greedy_independent_set, is_independent, Graph, RelabeledSubgraph, VertexSet, DEFAULT_MIS_NODE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NibbleParams {
    pub eps: f64,
    pub kappa: f64,
    /// Only enters the per-step diagnostic `beta = D^(-1/(20 t^2))`.
    pub t: u32,
    pub mis_node_cap: usize,
    pub d_floor_exponent: f64,
    pub r_cap_exponent: f64,
    /// Nibble-step budget; `None` uses `ceil(10 (1 - eps/3) ln d / ((1 + eps/5) eps))`.
    pub tau_cap: Option<u64>,
    pub finish_with_greedy: bool,
}

impl NibbleParams {
    pub fn new(eps: f64, t: u32) -> Self {
        NibbleParams {
            eps,
            kappa: eps / 10.0,
            t,
            mis_node_cap: DEFAULT_MIS_NODE_CAP,
            d_floor_exponent: eps / 8.0,
            r_cap_exponent: eps / 20.0,
            tau_cap: None,
            finish_with_greedy: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidParam(format!("eps = {} not in (0, 1)", self.eps)));
        }
        if !(self.kappa > 0.0 && self.kappa < 1.0 / 3.0) {
            return Err(Error::InvalidParam(format!("kappa = {} not in (0, 1/3)", self.kappa)));
        }
        if self.t == 0 {
            return Err(Error::InvalidParam("t must be positive".into()));
        }
        if self.tau_cap == Some(0) {
            return Err(Error::InvalidParam("tau_cap must be at least 1".into()));
        }
        Ok(())
    }

    /// The nibble budget for initial average degree `d`, at least 1.
    pub fn tau_cap_for(&self, d: f64) -> u64 {
        self.tau_cap.unwrap_or_else(|| {
            let eps = self.eps;
            let raw = 10.0 * (1.0 - eps / 3.0) * d.ln() / ((1.0 + eps / 5.0) * eps);
            (raw.ceil() as u64).max(1)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBounds {
    /// `n / (d + 1)`.
    pub greedy: f64,
    /// `(1 - eps) n ln d / d`.
    pub shearer_target: f64,
}

pub fn reference_bounds(n: usize, d: f64, eps: f64) -> ReferenceBounds {
    let n = n as f64;
    ReferenceBounds {
        greedy: n / (d + 1.0),
        shearer_target: (1.0 - eps) * n * d.ln() / d,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NibbleOutcome {
    /// Final independent set over the input's vertices.
    pub iset: VertexSet,
    /// Union of the nibble-step sets only.
    pub nibble_iset: VertexSet,
    /// The graph left at termination, in input ids.
    pub residual: RelabeledSubgraph,
    pub trace: NibbleTrace,
    pub stop: StopReason,
    /// Average degree of the input.
    pub d: f64,
    pub bounds: ReferenceBounds,
}

/// The current graph: a materialized subgraph plus cleaning deletions not
/// yet compacted away.
struct Residual {
    sub: RelabeledSubgraph,
    alive: Vec<bool>,
    deg: Vec<u32>,
    by_degree: BTreeSet<(Reverse<u32>, u32)>,
    n: usize,
    twice_m: u64,
}

impl Residual {
    fn new(sub: RelabeledSubgraph) -> Self {
        let g = &sub.graph;
        let deg: Vec<u32> = g.vertices().map(|v| g.degree(v)).collect();
        let by_degree = g.vertices().map(|v| (Reverse(deg[v as usize]), v)).collect();
        let n = g.n();
        let twice_m = 2 * g.m() as u64;
        Residual {
            alive: vec![true; n],
            deg,
            by_degree,
            n,
            twice_m,
            sub,
        }
    }

    fn avg(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.twice_m as f64 / self.n as f64
        }
    }

    /// Maximum degree and the lowest local id attaining it.
    fn top(&self) -> Option<(u32, u32)> {
        self.by_degree.first().map(|&(Reverse(d), v)| (d, v))
    }

    fn remove(&mut self, v: u32) {
        debug_assert!(self.alive[v as usize]);
        self.alive[v as usize] = false;
        self.by_degree.remove(&(Reverse(self.deg[v as usize]), v));
        self.twice_m -= 2 * self.deg[v as usize] as u64;
        self.n -= 1;
        for &w in self.sub.graph.neighbors(v) {
            if self.alive[w as usize] {
                let d = self.deg[w as usize];
                self.by_degree.remove(&(Reverse(d), w));
                self.by_degree.insert((Reverse(d - 1), w));
                self.deg[w as usize] = d - 1;
            }
        }
    }

    /// The current graph as a subgraph of the input.
    fn compact(&self) -> RelabeledSubgraph {
        if self.n == self.sub.graph.n() {
            return self.sub.clone();
        }
        let keep = VertexSet::from_iter(self.alive.len(), (0..self.alive.len() as u32).filter(|&v| self.alive[v as usize]));
        let inner = self.sub.graph.induced(&keep);
        let to_parent = inner.to_parent.iter().map(|&v| self.sub.to_parent[v as usize]).collect();
        RelabeledSubgraph {
            graph: inner.graph,
            to_parent,
        }
    }
}

fn finish(g: &Graph, nibble_iset: VertexSet, residual: RelabeledSubgraph, params: &NibbleParams) -> VertexSet {
    let mut iset = nibble_iset;
    if params.finish_with_greedy {
        let extra = greedy_independent_set(&residual.graph);
        iset.union_with(&residual.lift(&extra, g.n()));
    }
    iset
}

/// Runs the cleaning/nibble loop on `g`.
///
/// Inputs with average degree below 2 skip the loop and return the greedy
/// set, recorded as an immediate `T1` stop. With `finish_with_greedy` the
/// final set is the nibble sets plus a greedy independent set of the
/// residual graph, which has no vertex in `N[I]`.
pub fn run_nibble<R: Rng>(g: &Graph, params: &NibbleParams, rng: &mut R) -> Result<NibbleOutcome> {
    params.validate()?;
    let n = g.n();
    let d = g.avg_degree();
    let bounds = reference_bounds(n, d, params.eps);
    let mut records = Vec::new();

    if d < 2.0 {
        records.push(TraceRecord {
            i: 1,
            kind: StepKind::Stop,
            n,
            d,
            r: 1.0,
            tau: 0,
            detail: StepDetail::Stop {
                reason: StopReason::T1,
                note: Some("average degree below 2, greedy only".into()),
            },
        });
        let iset = greedy_independent_set(g);
        assert!(is_independent(g, &iset));
        return Ok(NibbleOutcome {
            iset,
            nibble_iset: VertexSet::new(n),
            residual: RelabeledSubgraph::identity(g.clone()),
            trace: NibbleTrace { eps: params.eps, records },
            stop: StopReason::T1,
            d,
            bounds,
        });
    }

    let d_floor = d.powf(params.d_floor_exponent);
    let r_cap = d.powf(params.r_cap_exponent);
    let tau_cap = params.tau_cap_for(d);
    let beta_exp = -1.0 / (20.0 * (params.t as f64).powi(2));

    let mut h = Residual::new(RelabeledSubgraph::identity(g.clone()));
    let mut nibble_iset = VertexSet::new(n);
    let mut r = 1.0f64;
    let mut tau = 0u64;
    let mut i = 1u64;
    let stop = loop {
        let di = h.avg();
        let reason = if di < d_floor {
            Some(StopReason::T1)
        } else if r > r_cap {
            Some(StopReason::T2)
        } else if tau >= tau_cap {
            Some(StopReason::T3)
        } else {
            None
        };
        let mut record = TraceRecord {
            i,
            kind: StepKind::Stop,
            n: h.n,
            d: di,
            r,
            tau,
            detail: StepDetail::Stop {
                reason: StopReason::T1,
                note: None,
            },
        };
        if let Some(reason) = reason {
            record.detail = StepDetail::Stop { reason, note: None };
            records.push(record);
            break reason;
        }
        let (max_deg, top) = h.top().expect("average degree positive");
        if cleaning_fires(max_deg, h.twice_m, h.n, params.eps) {
            record.kind = StepKind::Clean;
            record.detail = StepDetail::Clean {
                removed: h.sub.to_parent[top as usize],
                degree: max_deg,
            };
            r *= h.n as f64 / (h.n - 1) as f64;
            h.remove(top);
        } else {
            let cur = h.compact();
            let p = params.kappa / di;
            let step = iset_step(&cur.graph, p, rng, params.mis_node_cap);
            let s = step.stats;
            let beta = di.powf(beta_exp);
            let nf = h.n as f64;
            let expected = s.gamma * (1.0 - p) * nf;
            let residual_avg = if s.survivors == 0 {
                0.0
            } else {
                2.0 * s.residual_edges as f64 / s.survivors as f64
            };
            record.kind = StepKind::Nibble;
            record.detail = StepDetail::Nibble(NibbleDetail {
                iset: s.independent,
                activated: s.activated,
                activated_edges: s.activated_edges,
                survivors: s.survivors,
                residual_edges: s.residual_edges,
                p,
                gamma: s.gamma,
                beta,
                r1: s.independent as f64 >= (1.0 - 2.0 * params.kappa) * nf * p,
                r2: (s.survivors as f64 - expected).abs() <= beta * expected,
                r3: residual_avg <= (1.0 + 4.0 * beta) * s.gamma * di,
            });
            nibble_iset.union_with(&cur.lift(&step.independent, n));
            let to_parent = step.residual.to_parent.iter().map(|&v| cur.to_parent[v as usize]).collect();
            h = Residual::new(RelabeledSubgraph {
                graph: step.residual.graph,
                to_parent,
            });
            tau += 1;
        }
        records.push(record);
        i += 1;
    };

    let residual = h.compact();
    let iset = finish(g, nibble_iset.clone(), residual.clone(), params);
    assert!(is_independent(g, &iset), "nibble output is not independent");
    Ok(NibbleOutcome {
        iset,
        nibble_iset,
        residual,
        trace: NibbleTrace { eps: params.eps, records },
        stop,
        d,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{self, classic};
    use crate::rng::{stream, Tag};

    fn run(g: &Graph, params: &NibbleParams, seed: u64) -> NibbleOutcome {
        run_nibble(g, params, &mut stream(seed, Tag::Nibble, 0)).unwrap()
    }

    #[test]
    fn edgeless_is_immediate_stop() {
        let g = Graph::empty(12);
        let out = run(&g, &NibbleParams::new(0.25, 1), 0);
        assert_eq!(out.iset.len(), 12);
        assert_eq!(out.stop, StopReason::T1);
        assert_eq!(out.trace.records.len(), 1);
    }

    #[test]
    fn cliques_never_clean() {
        let g = classic::disjoint_union(&classic::complete(9), 30);
        let out = run(&g, &NibbleParams::new(0.5, 1), 3);
        let sum = out.trace.summary();
        assert_eq!(sum.cleaning_steps, 0);
        assert!(sum.nibble_steps > 0);
        for c in 0..30u32 {
            let hits = out.iset.iter().filter(|&v| v / 9 == c).count();
            assert_eq!(hits, 1, "copy {c}");
        }
        out.trace.check_monotone().unwrap();
    }

    #[test]
    fn wheel_cleans_its_hub() {
        // wheel: hub 0 joined to a 12-cycle
        let rim = (1..=12u32).map(|v| (v, v % 12 + 1));
        let g = Graph::from_edges(13, (1..=12u32).map(|v| (0, v)).chain(rim)).unwrap();
        let mut params = NibbleParams::new(0.3, 1);
        params.tau_cap = Some(5);
        let out = run(&g, &params, 1);
        assert_eq!(out.trace.records[0].kind, StepKind::Clean);
        assert_eq!(out.trace.records[0].detail, StepDetail::Clean { removed: 0, degree: 12 });
        assert!(is_independent(&g, &out.iset));
        assert!(check_cleaning_inequalities(&out.trace).passed());
    }

    #[test]
    fn gnp_run_is_consistent() {
        let g = gen::gnp(3000, 12.0 / 3000.0, 5).unwrap();
        let params = NibbleParams::new(0.5, 1);
        let out = run(&g, &params, 7);
        out.trace.check_monotone().unwrap();
        assert!(check_cleaning_inequalities(&out.trace).passed());
        assert!(out.nibble_iset.iter().all(|v| out.iset.contains(v)));
        for v in out.residual.to_parent.iter() {
            assert!(!out.nibble_iset.contains(*v));
            assert!(g.neighbors(*v).iter().all(|&w| !out.nibble_iset.contains(w)));
        }
        let again = run(&g, &params, 7);
        assert_eq!(again.iset, out.iset);
        assert_eq!(again.trace, out.trace);
    }

    #[test]
    fn no_finish_returns_nibble_sets() {
        let g = classic::disjoint_union(&classic::complete(5), 50);
        let mut params = NibbleParams::new(0.5, 1);
        params.finish_with_greedy = false;
        let out = run(&g, &params, 2);
        assert_eq!(out.iset, out.nibble_iset);
    }

    #[test]
    fn params_validation() {
        assert!(NibbleParams::new(0.0, 1).validate().is_err());
        assert!(NibbleParams::new(1.0, 1).validate().is_err());
        assert!(NibbleParams::new(0.5, 0).validate().is_err());
        let mut p = NibbleParams::new(0.5, 1);
        p.tau_cap = Some(0);
        assert!(p.validate().is_err());
        p.tau_cap = None;
        p.kappa = 0.4;
        assert!(p.validate().is_err());
        assert_eq!(NibbleParams::new(0.25, 1).tau_cap_for(64.0), 146);
    }

    #[test]
    fn reference_bound_values() {
        let b = reference_bounds(1000, std::f64::consts::E - 1.0, 0.0);
        assert!((b.greedy - 1000.0 / std::f64::consts::E).abs() < 1e-9);
        assert!((b.shearer_target - 315.0).abs() < 0.1);
        let b = reference_bounds(200_000, 64.0, 0.25);
        assert!((b.shearer_target - 9747.39).abs() < 0.1);
        let big = reference_bounds(10, 1e8, 0.0);
        assert!((big.shearer_target / big.greedy / 1e8f64.ln() - 1.0).abs() < 1e-6);
    }
}
