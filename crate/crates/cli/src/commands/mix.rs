//! `mix`: distance of the k-step walk distribution from stationarity.

use super::GraphSpec;
use crate::output::{num, ExperimentResult, Table};
use anyhow::Result;
use erwalk::mixing_norms;
use serde_json::{json, Map};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct MixParams {
    pub source: GraphSpec,
    pub target: usize,
    pub k_max: usize,
}

pub fn run(params: &MixParams) -> Result<ExperimentResult> {
    let start = Instant::now();
    let g = params.source.load()?;
    let rows = mixing_norms(&g, params.target, params.k_max)?;
    let mut table = Table::new(vec!["k", "l1", "l2"]);
    for row in &rows {
        table.push(vec![json!(row.k), num(row.l1), num(row.l2)]);
    }
    let mut metadata = Map::new();
    metadata.insert("source".into(), params.source.describe(&g));
    metadata.insert("target".into(), json!(params.target));
    metadata.insert("k_max".into(), json!(params.k_max));
    metadata.insert("seeds".into(), json!([g.seed()]));
    metadata.insert("wall_time_s".into(), num(start.elapsed().as_secs_f64()));
    Ok(ExperimentResult::new(metadata, table))
}
