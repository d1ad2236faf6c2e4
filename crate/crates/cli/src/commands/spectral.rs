//! `spectral`: spectrum of the normalized adjacency operator plus the
//! adjacency extremal data.

use super::GraphSpec;
use crate::output::{num, ExperimentResult, Table};
use anyhow::Result;
use erwalk::{eigen_b, perron_deviation};
use serde_json::{json, Map};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SpectralParams {
    pub source: GraphSpec,
}

pub fn run(params: &SpectralParams) -> Result<ExperimentResult> {
    let start = Instant::now();
    let g = params.source.load()?;
    let spec = eigen_b(&g)?;
    let mut table = Table::new(vec!["k", "lambda"]);
    for (k, lambda) in spec.eigenvalues().iter().enumerate() {
        table.push(vec![json!(k + 1), num(*lambda)]);
    }
    let mut metadata = Map::new();
    metadata.insert("source".into(), params.source.describe(&g));
    metadata.insert("lambda1_adjacency".into(), num(spec.lambda1_adjacency()));
    metadata.insert("lambda2_adjacency".into(), num(spec.lambda2_adjacency()));
    metadata.insert("perron_deviation".into(), num(perron_deviation(&g, &spec)));
    metadata.insert("seeds".into(), json!([g.seed()]));
    metadata.insert("wall_time_s".into(), num(start.elapsed().as_secs_f64()));
    Ok(ExperimentResult::new(metadata, table))
}
