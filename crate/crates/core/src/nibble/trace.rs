use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Clean,
    Nibble,
    Stop,
}

/// `T1`: average degree fell below `d^(eps/8)`. `T2`: the cleaning ratio
/// exceeded `d^(eps/20)`. `T3`: the nibble-step budget was used up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    T1,
    T2,
    T3,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Nibble-step counts with the three per-step contracts evaluated on them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NibbleDetail {
    pub iset: usize,
    pub activated: usize,
    pub activated_edges: usize,
    pub survivors: usize,
    pub residual_edges: usize,
    pub p: f64,
    pub gamma: f64,
    pub beta: f64,
    /// `|I| >= (1 - 2 kappa) N p`.
    pub r1: bool,
    /// `|K|` within `(1 +- beta) gamma (1-p) N`.
    pub r2: bool,
    /// `d(H[K]) <= (1 + 4 beta) gamma D`.
    pub r3: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StepDetail {
    Clean { removed: u32, degree: u32 },
    Nibble(NibbleDetail),
    Stop { reason: StopReason, note: Option<String> },
}

/// State at the start of iteration `i`, and what the iteration did.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub i: u64,
    pub kind: StepKind,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub tau: u64,
    pub detail: StepDetail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NibbleTrace {
    pub eps: f64,
    pub records: Vec<TraceRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub cleaning_steps: usize,
    pub nibble_steps: usize,
    pub stop: Option<StopReason>,
}

impl NibbleTrace {
    pub fn summary(&self) -> TraceSummary {
        let count = |k| self.records.iter().filter(|r| r.kind == k).count();
        let stop = self.records.last().and_then(|r| match r.detail {
            StepDetail::Stop { reason, .. } => Some(reason),
            _ => None,
        });
        TraceSummary {
            cleaning_steps: count(StepKind::Clean),
            nibble_steps: count(StepKind::Nibble),
            stop,
        }
    }

    pub fn write_json_lines<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_json_lines<R: BufRead>(eps: f64, reader: R) -> Result<Self, String> {
        let mut records = Vec::new();
        for (k, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| e.to_string())?;
            if line.trim().is_empty() {
                continue;
            }
            records.push(serde_json::from_str(&line).map_err(|e| format!("line {}: {e}", k + 1))?);
        }
        Ok(NibbleTrace { eps, records })
    }

    /// Checks the bookkeeping of the loop: `N` never grows and drops by one
    /// on cleaning, `R` changes only on cleaning and never decreases, `tau`
    /// grows by one exactly on nibble steps, and only the last record stops.
    pub fn check_monotone(&self) -> Result<(), String> {
        for (k, w) in self.records.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            if a.kind == StepKind::Stop {
                return Err(format!("record {k} stops but is not last"));
            }
            if b.i != a.i + 1 || b.n > a.n {
                return Err(format!("record {k}: index or N out of order"));
            }
            match a.kind {
                StepKind::Clean => {
                    if b.n + 1 != a.n || b.r < a.r || b.tau != a.tau {
                        return Err(format!("record {k}: cleaning step bookkeeping"));
                    }
                }
                StepKind::Nibble => {
                    if b.r != a.r || b.tau != a.tau + 1 {
                        return Err(format!("record {k}: nibble step bookkeeping"));
                    }
                }
                StepKind::Stop => unreachable!(),
            }
        }
        match self.records.last() {
            Some(r) if r.kind == StepKind::Stop => Ok(()),
            _ => Err("trace does not end with a stop record".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleaningCheck {
    pub i: u64,
    pub n: usize,
    pub d: f64,
    pub n_next: usize,
    pub d_next: f64,
    /// `N'/D' >= (1 + eps/(5N)) N/D`.
    pub ratio_gain: bool,
    /// `(N'/D') / (N/D) >= (N/N')^(eps/20)`.
    pub power_gain: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CleaningReport {
    pub checked: usize,
    /// Cleaning steps skipped because `N < 3` or `D' = 0`.
    pub guarded: usize,
    pub violations: Vec<CleaningCheck>,
}

impl CleaningReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const SLACK: f64 = 1e-12;

/// Verifies the two ratio inequalities on every cleaning step of the trace,
/// using the recorded `(N, D)` before and after the step.
pub fn check_cleaning_inequalities(trace: &NibbleTrace) -> CleaningReport {
    let eps = trace.eps;
    let mut report = CleaningReport::default();
    for w in trace.records.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.kind != StepKind::Clean {
            continue;
        }
        if a.n < 3 || b.d <= 0.0 {
            report.guarded += 1;
            continue;
        }
        report.checked += 1;
        let before = a.n as f64 / a.d;
        let after = b.n as f64 / b.d;
        let ratio_gain = after >= (1.0 + eps / (5.0 * a.n as f64)) * before * (1.0 - SLACK);
        let power_gain = after / before >= (a.n as f64 / b.n as f64).powf(eps / 20.0) * (1.0 - SLACK);
        if !(ratio_gain && power_gain) {
            report.violations.push(CleaningCheck {
                i: a.i,
                n: a.n,
                d: a.d,
                n_next: b.n,
                d_next: b.d,
                ratio_gain,
                power_gain,
            });
        }
    }
    report
}
