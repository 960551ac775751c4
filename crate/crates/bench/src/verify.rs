//! Exact verification of output files against a graph file.

use std::fmt;
use std::path::{Path, PathBuf};

use kttt_core::coloring::{verify_coloring, Coloring};
use kttt_core::graph::{first_internal_edge, VertexSet};
use kttt_core::partition::{verify_partition, Partition};
use kttt_core::Graph;

use crate::io::{read_graph, read_integers, BenchError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Artifact {
    Iset(PathBuf),
    Coloring(PathBuf),
    /// Class ids per vertex, with the allowed maximum degree inside a class.
    Partition {
        path: PathBuf,
        degree_bound: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub passed: bool,
    pub summary: String,
    pub witness: Option<String>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.passed { "PASS" } else { "FAIL" }, self.summary)?;
        if let Some(w) = &self.witness {
            write!(f, "; witness {w}")?;
        }
        Ok(())
    }
}

fn to_u32(path: &Path, values: Vec<u64>, limit: u64, what: &str) -> Result<Vec<u32>> {
    values
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            if x < limit {
                Ok(x as u32)
            } else {
                Err(BenchError::Config(format!(
                    "{}: entry {} is {what} {x}, out of range",
                    path.display(),
                    k + 1
                )))
            }
        })
        .collect()
}

pub fn verify_iset(g: &Graph, vertices: &[u32]) -> Verdict {
    let set = VertexSet::from_iter(g.n(), vertices.iter().copied());
    let summary = format!("independent set of size {}", set.len());
    match first_internal_edge(g, &set) {
        None if set.len() == vertices.len() => Verdict {
            passed: true,
            summary,
            witness: None,
        },
        None => Verdict {
            passed: false,
            summary,
            witness: Some("repeated vertex".into()),
        },
        Some((u, v)) => Verdict {
            passed: false,
            summary,
            witness: Some(format!("edge ({u}, {v})")),
        },
    }
}

/// Verifies one artifact file against the graph file.
pub fn verify_artifacts(graph: &Path, artifact: &Artifact) -> Result<Verdict> {
    let g = read_graph(graph)?;
    let n = g.n() as u64;
    match artifact {
        Artifact::Iset(path) => {
            let vertices = to_u32(path, read_integers(path)?, n, "vertex")?;
            Ok(verify_iset(&g, &vertices))
        }
        Artifact::Coloring(path) => {
            let colors = to_u32(path, read_integers(path)?, u32::MAX as u64, "color")?;
            let c = Coloring::from_raw(colors);
            let report = verify_coloring(&g, &c)?;
            Ok(Verdict {
                passed: report.passed,
                summary: format!(
                    "coloring with {} colors, {} monochromatic edges",
                    c.palette_size,
                    report.monochromatic.len()
                ),
                witness: report.monochromatic.first().map(|(u, v)| format!("edge ({u}, {v})")),
            })
        }
        Artifact::Partition { path, degree_bound } => {
            let labels = to_u32(path, read_integers(path)?, u32::MAX as u64, "class")?;
            let p = Partition::from_labels(&g, &labels)?;
            let report = verify_partition(&g, &p, *degree_bound)?;
            let witness = report
                .triangle_witness
                .map(|(c, t)| format!("triangle {t:?} in class {c}"))
                .or_else(|| report.degree_violations.first().map(|c| format!("class {c} exceeds degree bound")));
            Ok(Verdict {
                passed: report.passed,
                summary: format!(
                    "{} classes, max class degree {} (bound {degree_bound})",
                    report.k, report.max_part_degree
                ),
                witness,
            })
        }
    }
}
