//! `mc`: Monte Carlo estimate of one hitting time.

use super::GraphSpec;
use crate::output::{num, ExperimentResult, Table};
use anyhow::{bail, Result};
use erwalk::{default_cap, sample_hitting};
use serde_json::{json, Map};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct McParams {
    pub source: GraphSpec,
    pub origin: usize,
    pub target: usize,
    pub trials: u64,
    pub seed: u64,
    pub cap: Option<u64>,
}

pub fn run(params: &McParams) -> Result<ExperimentResult> {
    let start = Instant::now();
    let g = params.source.load()?;
    if params.origin == params.target {
        bail!("origin and target must differ");
    }
    let cap = params.cap.unwrap_or_else(|| default_cap(g.n()));
    let sample = sample_hitting(&g, params.origin, params.target, params.trials, params.seed, cap)?;
    let mut table = Table::new(vec![
        "origin",
        "target",
        "trials",
        "mean_hit",
        "stderr",
        "hit_within_2",
        "seed",
    ]);
    table.push(vec![
        json!(sample.origin),
        json!(sample.target),
        json!(sample.trials),
        num(sample.mean_hit),
        num(sample.stderr),
        num(sample.hit_within_2),
        json!(sample.seed),
    ]);
    let mut metadata = Map::new();
    metadata.insert("source".into(), params.source.describe(&g));
    metadata.insert("cap".into(), json!(cap));
    metadata.insert("seeds".into(), json!([params.seed]));
    metadata.insert("wall_time_s".into(), num(start.elapsed().as_secs_f64()));
    Ok(ExperimentResult::new(metadata, table))
}
