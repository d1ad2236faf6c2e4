//! One module per subcommand. Each exposes a resolved parameter struct and
//! a `run` function returning an [`ExperimentResult`](crate::output::ExperimentResult),
//! so tests can drive commands in-process.

pub mod clt;
pub mod gen;
pub mod hist;
pub mod mc;
pub mod mix;
pub mod scan;
pub mod spectral;
pub mod verify;

use anyhow::{Context, Result};
use erwalk::{generate_er, ErGraph};
use serde_json::{json, Value};
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

/// Where a command's graph comes from: a fresh seeded realization or an
/// edge-list file.
#[derive(Debug, Clone)]
pub enum GraphSpec {
    Generate { n: usize, p: f64, seed: u64 },
    File(PathBuf),
}

impl GraphSpec {
    pub fn load(&self) -> Result<ErGraph> {
        match self {
            GraphSpec::Generate { n, p, seed } => {
                generate_er(*n, *p, *seed).context("generating graph")
            }
            GraphSpec::File(path) => {
                let file =
                    File::open(path).with_context(|| format!("opening {}", path.display()))?;
                ErGraph::read_edge_list(BufReader::new(file))
                    .with_context(|| format!("reading {}", path.display()))
            }
        }
    }

    /// Metadata echo of the source.
    pub fn describe(&self, g: &ErGraph) -> Value {
        match self {
            GraphSpec::Generate { .. } => json!({
                "n": g.n(), "p": g.p(), "seed": g.seed(), "edge_count": g.edge_count(),
            }),
            GraphSpec::File(path) => json!({
                "graph_file": path.display().to_string(),
                "n": g.n(), "p": g.p(), "seed": g.seed(), "edge_count": g.edge_count(),
            }),
        }
    }
}
