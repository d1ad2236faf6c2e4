//! `clt`: distribution of the standardized hitting time
//! sqrt(p/(n(1-p))) (H_01 - n) over independent realizations, with its
//! Kolmogorov-Smirnov distance to the standard normal.

use crate::output::{num, ExperimentResult, Table};
use anyhow::{bail, Result};
use erwalk::{exact_hitting, generate_er};
use rayon::prelude::*;
use serde_json::{json, Map};
use statrs::distribution::{ContinuousCDF, Normal};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct CltParams {
    pub n: usize,
    pub p: f64,
    /// One realization per seed.
    pub seeds: Vec<u64>,
}

/// Sup distance between the empirical CDF of `samples` and the standard
/// normal CDF. `samples` must be sorted.
pub fn ks_distance_standard_normal(sorted: &[f64]) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let m = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = normal.cdf(x);
        sup = sup.max(cdf - i as f64 / m);
        sup = sup.max((i + 1) as f64 / m - cdf);
    }
    sup
}

pub fn run(params: &CltParams) -> Result<ExperimentResult> {
    let start = Instant::now();
    if params.seeds.is_empty() {
        bail!("clt needs at least one seed");
    }
    if params.p >= 1.0 {
        bail!("the standardized statistic needs p < 1");
    }
    if params.n < 2 {
        bail!("clt needs n >= 2");
    }
    let scale = (params.p / (params.n as f64 * (1.0 - params.p))).sqrt();
    let outcomes: Vec<Option<f64>> = params
        .seeds
        .par_iter()
        .map(|&seed| -> Result<Option<f64>> {
            let g = generate_er(params.n, params.p, seed)?;
            if !g.is_connected() {
                return Ok(None);
            }
            // hitting time between the first two vertices
            let hv = exact_hitting(&g, 1)?;
            Ok(Some(scale * (hv.value(0) - params.n as f64)))
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(vec!["replicate", "seed", "statistic"]);
    let mut samples = Vec::new();
    let mut skipped = 0usize;
    for (i, (seed, outcome)) in params.seeds.iter().zip(&outcomes).enumerate() {
        match outcome {
            Some(stat) => {
                samples.push(*stat);
                table.push(vec![json!(i), json!(seed), num(*stat)]);
            }
            None => {
                skipped += 1;
                table.push(vec![json!(i), json!(seed), serde_json::Value::Null]);
            }
        }
    }

    let m = samples.len();
    let mut metadata = Map::new();
    metadata.insert("n".into(), json!(params.n));
    metadata.insert("p".into(), num(params.p));
    metadata.insert("replicates".into(), json!(params.seeds.len()));
    metadata.insert("seeds".into(), json!(params.seeds));
    metadata.insert("effective_m".into(), json!(m));
    metadata.insert("skipped_disconnected".into(), json!(skipped));
    metadata.insert("degenerate".into(), json!(m < 2));
    if m > 0 {
        let mut sorted = samples.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        metadata.insert("ks_distance".into(), num(ks_distance_standard_normal(&sorted)));
        let mean = samples.iter().sum::<f64>() / m as f64;
        metadata.insert("sample_mean".into(), num(mean));
        if m > 1 {
            let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1) as f64;
            metadata.insert("sample_variance".into(), num(var));
        }
    }
    metadata.insert("wall_time_s".into(), num(start.elapsed().as_secs_f64()));
    Ok(ExperimentResult::new(metadata, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_distance_of_exact_quantiles_is_small() {
        let normal = Normal::new(0.0, 1.0).unwrap();
        let m = 1000;
        let sorted: Vec<f64> = (0..m)
            .map(|i| normal.inverse_cdf((i as f64 + 0.5) / m as f64))
            .collect();
        let d = ks_distance_standard_normal(&sorted);
        assert!(d <= 0.5 / m as f64 + 1e-9, "d = {d}");
    }

    #[test]
    fn ks_distance_of_shifted_sample_is_large() {
        let sorted: Vec<f64> = (0..100).map(|i| 3.0 + i as f64 * 0.01).collect();
        assert!(ks_distance_standard_normal(&sorted) > 0.9);
    }
}
