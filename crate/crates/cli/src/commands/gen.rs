//! `gen`: sample a realization and write its edge list.

use anyhow::{Context, Result};
use erwalk::generate_er;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct GenParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

pub fn run(params: &GenParams) -> Result<()> {
    let g = generate_er(params.n, params.p, params.seed)?;
    let mut buf = Vec::new();
    g.write_edge_list(&mut buf)?;
    match &params.out {
        Some(path) => write_file(path, &buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}
