use super::Graph;
use crate::error::{Error, Result};

/// Whether `g` contains `K_{t,t,t}` as a (not necessarily induced) subgraph.
///
/// Backtracking over three mutually completely joined `t`-sets `X`, `Y`, `Z`:
/// `X` is grown while its common neighborhood `C` keeps at least `2t`
/// vertices, then `Y ⊆ C` is grown while `C ∩ N(Y)` keeps at least `t`.
/// Every search node counts against `budget`; running out yields
/// [`Error::BudgetExceeded`], meaning the answer is unknown.
pub fn contains_kttt(g: &Graph, t: usize, budget: u64) -> Result<bool> {
    if t == 0 {
        return Err(Error::InvalidParam("t must be at least 1".into()));
    }
    let mut search = KtttSearch { g, t, budget, spent: 0 };
    let mut x = Vec::with_capacity(t);
    search.grow_x(&mut x, None)
}

struct KtttSearch<'a> {
    g: &'a Graph,
    t: usize,
    budget: u64,
    spent: u64,
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl KtttSearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.spent += 1;
        if self.spent > self.budget {
            Err(Error::BudgetExceeded { budget: self.budget })
        } else {
            Ok(())
        }
    }

    fn grow_x(&mut self, x: &mut Vec<u32>, common: Option<&[u32]>) -> Result<bool> {
        self.tick()?;
        if x.len() == self.t {
            let c = common.expect("t >= 1");
            let mut y = Vec::with_capacity(self.t);
            return self.grow_y(c, &mut y, c);
        }
        let candidates: Vec<u32> = match (common, x.last()) {
            (Some(c), Some(&last)) => {
                let mut cand: Vec<u32> = c
                    .iter()
                    .flat_map(|&w| self.g.neighbors(w).iter().copied())
                    .filter(|&w| w > last)
                    .collect();
                cand.sort_unstable();
                cand.dedup();
                cand
            }
            _ => self.g.vertices().collect(),
        };
        for v in candidates {
            let next = match common {
                Some(c) => intersect(c, self.g.neighbors(v)),
                None => self.g.neighbors(v).to_vec(),
            };
            if next.len() < 2 * self.t {
                continue;
            }
            x.push(v);
            let found = self.grow_x(x, Some(&next))?;
            x.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn grow_y(&mut self, c: &[u32], y: &mut Vec<u32>, rest: &[u32]) -> Result<bool> {
        self.tick()?;
        if y.len() == self.t {
            return Ok(true);
        }
        let last = y.last().copied();
        for &v in c.iter().filter(|&&v| last.is_none_or(|l| v > l)) {
            let next = intersect(rest, self.g.neighbors(v));
            if next.len() < self.t {
                continue;
            }
            y.push(v);
            let found = self.grow_y(c, y, &next)?;
            y.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
