use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: u32 },

    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: u32, v: u32 },

    #[error("line {line}: vertex id {id} out of range for n = {n}")]
    OutOfRange { line: usize, id: u64, n: usize },

    #[error("instance too large: {n} vertices exceeds cap {cap}")]
    InstanceTooLarge { n: usize, cap: usize },

    #[error("search budget of {budget} node expansions exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("ordering is not a permutation of 0..{n}: {msg}")]
    NotAPermutation { n: usize, msg: String },

    #[error("resample budget exhausted after {resamples} resamples ({remaining} events still violated)")]
    ResampleBudgetExhausted { resamples: u64, remaining: usize },

    #[error("certification failure: {0}")]
    Certification(String),

    #[error("partition does not cover the graph: {0}")]
    NotCovering(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("random regular generation failed after {attempts} attempts")]
    RetryBudgetExhausted { attempts: u32 },
}
