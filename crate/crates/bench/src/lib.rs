//! Experiment driver for `kttt-core`: file formats, artifact verification
//! and the benchmark suite behind the `kttt` binary.

pub mod io;
pub mod suite;
pub mod verify;

pub use io::BenchError;
pub use suite::{all_verified, artifact_path, parse_seeds, run_suite, write_csv, Algorithm, Instance, RunConfig, RunReport, CSV_SCHEMA};
pub use verify::{verify_artifacts, Artifact, Verdict};
