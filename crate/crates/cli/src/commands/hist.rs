//! `hist`: exact hitting times for one realization, against the
//! two-cluster prediction. Single-target by default; all-pairs on request.

use super::GraphSpec;
use crate::output::{num, ExperimentResult, Table};
use anyhow::{bail, Result};
use erwalk::{
    empirical_edge_probability, exact_hitting, exact_hitting_all, prediction_with, ErGraph,
    HittingVector,
};
use serde_json::{json, Map};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct HistParams {
    pub source: GraphSpec,
    pub target: usize,
    pub all_pairs: bool,
    /// Substitute the empirical edge density 2|E|/(n(n-1)) for the nominal
    /// p in predictions.
    pub empirical_p: bool,
}

pub fn run(params: &HistParams) -> Result<ExperimentResult> {
    let start = Instant::now();
    let g = params.source.load()?;
    if !params.all_pairs && params.target >= g.n() {
        bail!("target {} out of range for n = {}", params.target, g.n());
    }
    let p_used = if params.empirical_p {
        empirical_edge_probability(&g)
    } else {
        g.p()
    };

    let mut table = Table::new(vec!["w", "v", "adjacent", "H", "prediction"]);
    let mut adjacent_sum = (0.0, 0usize);
    let mut nonadjacent_sum = (0.0, 0usize);
    let mut emit = |g: &ErGraph, hv: &HittingVector| -> Result<()> {
        let v = hv.target();
        let pred = prediction_with(g, v, p_used, 1.0)?;
        for (w, &h) in hv.values().iter().enumerate() {
            if w == v {
                continue;
            }
            let adjacent = g.has_edge(w, v);
            if adjacent {
                adjacent_sum.0 += h;
                adjacent_sum.1 += 1;
            } else {
                nonadjacent_sum.0 += h;
                nonadjacent_sum.1 += 1;
            }
            table.push(vec![
                json!(w),
                json!(v),
                json!(adjacent),
                num(h),
                num(pred.value(adjacent)),
            ]);
        }
        Ok(())
    };

    let mut metadata = Map::new();
    if params.all_pairs {
        for hv in exact_hitting_all(&g)? {
            emit(&g, &hv)?;
        }
        metadata.insert("mode".into(), json!("all-pairs"));
    } else {
        let hv = exact_hitting(&g, params.target)?;
        emit(&g, &hv)?;
        metadata.insert("mode".into(), json!("single-target"));
        metadata.insert("target".into(), json!(params.target));
        let pred = prediction_with(&g, params.target, p_used, 1.0)?;
        metadata.insert("predicted_adjacent".into(), num(pred.value(true)));
        metadata.insert("predicted_nonadjacent".into(), num(pred.value(false)));
        metadata.insert("envelope".into(), num(pred.envelope));
    }

    let mean_adjacent = adjacent_sum.0 / adjacent_sum.1.max(1) as f64;
    metadata.insert("source".into(), params.source.describe(&g));
    metadata.insert("p_used".into(), num(p_used));
    metadata.insert("empirical_p".into(), json!(params.empirical_p));
    if adjacent_sum.1 > 0 {
        metadata.insert("cluster_mean_adjacent".into(), num(mean_adjacent));
    }
    if nonadjacent_sum.1 > 0 {
        let mean_nonadjacent = nonadjacent_sum.0 / nonadjacent_sum.1 as f64;
        metadata.insert("cluster_mean_nonadjacent".into(), num(mean_nonadjacent));
        if adjacent_sum.1 > 0 {
            metadata.insert(
                "cluster_separation".into(),
                num(mean_nonadjacent - mean_adjacent),
            );
        }
    }
    metadata.insert("wall_time_s".into(), num(start.elapsed().as_secs_f64()));
    metadata.insert("seeds".into(), json!([g.seed()]));
    Ok(ExperimentResult::new(metadata, table))
}
