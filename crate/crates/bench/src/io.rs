//! Plain-text artifacts.
//!
//! Graphs use the edge-list format of [`Graph::write_edge_list`]. Vertex
//! sets list one vertex id per line. Colorings and partitions list one
//! integer per line, line `k` belonging to vertex `k`. Blank lines are
//! ignored everywhere.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use kttt_core::Graph;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Graph { path: PathBuf, source: kttt_core::Error },
    #[error("{}: line {line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] kttt_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Config(String),
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(io_err(path))
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    Graph::from_edge_list(open(path)?).map_err(|source| BenchError::Graph {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    let mut w = create(path)?;
    g.write_edge_list(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

/// Non-blank lines parsed as unsigned integers.
pub fn read_integers(path: &Path) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (k, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        let x = s.parse::<u64>().map_err(|e| BenchError::Parse {
            path: path.to_path_buf(),
            line: k + 1,
            msg: format!("{s:?}: {e}"),
        })?;
        out.push(x);
    }
    Ok(out)
}

pub fn write_integers<I: IntoIterator<Item = u64>>(path: &Path, values: I) -> Result<()> {
    let mut w = create(path)?;
    let go = || -> std::io::Result<()> {
        for x in values {
            writeln!(w, "{x}")?;
        }
        w.flush()
    };
    go().map_err(io_err(path))
}
