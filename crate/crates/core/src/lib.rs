//! Independent sets, triangle-free partitions and colorings of graphs
//! without a complete tripartite subgraph `K_{t,t,t}`.
//!
//! The crate provides a compact immutable [`Graph`], exact and greedy
//! independent-set routines, left-sparse vertex orderings, a Moser–Tardos
//! partition into triangle-free parts, the cleaning/nibble independent-set
//! procedure and a coloring pipeline built on the partition.

pub mod coloring;
pub mod error;
pub mod gen;
pub mod graph;
pub mod nibble;
pub mod partition;
pub mod rng;
pub mod turan;

pub use error::{Error, Result};
pub use graph::{Graph, RelabeledSubgraph, VertexSet};
