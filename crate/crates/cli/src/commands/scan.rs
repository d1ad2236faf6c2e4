//! `scan`: max prediction error across an n-grid, with the fitted log-log
//! slope of the per-n median error.

use crate::output::{num, ExperimentResult, Table};
use anyhow::{bail, Result};
use erwalk::{exact_hitting, generate_er, max_prediction_error};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct ScanParams {
    pub grid: Vec<usize>,
    pub p: f64,
    /// One realization per (grid point, seed).
    pub seeds: Vec<u64>,
    pub target: usize,
}

fn median(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    }
}

/// Least-squares slope of ln(err) against ln(n). Needs at least two grid
/// points with data; otherwise `None`.
fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let denom = m * sxx - sx * sx;
    (denom.abs() > 1e-12).then(|| (m * sxy - sx * sy) / denom)
}

pub fn run(params: &ScanParams) -> Result<ExperimentResult> {
    let start = Instant::now();
    if params.grid.is_empty() {
        bail!("scan needs a non-empty n grid");
    }
    if params.seeds.is_empty() {
        bail!("scan needs at least one seed");
    }
    let cells: Vec<(usize, u64)> = params
        .grid
        .iter()
        .flat_map(|&n| params.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let errors: Vec<Option<f64>> = cells
        .par_iter()
        .map(|&(n, seed)| -> Result<Option<f64>> {
            let g = generate_er(n, params.p, seed)?;
            if !g.is_connected() {
                return Ok(None);
            }
            let v = params.target.min(n - 1);
            let hv = exact_hitting(&g, v)?;
            Ok(Some(max_prediction_error(&g, v, &hv)?))
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(vec!["n", "seed", "err"]);
    let mut skipped = 0usize;
    for (&(n, seed), err) in cells.iter().zip(&errors) {
        match err {
            Some(e) => table.push(vec![json!(n), json!(seed), num(*e)]),
            None => {
                skipped += 1;
                table.push(vec![json!(n), json!(seed), Value::Null]);
            }
        }
    }

    let mut medians = Map::new();
    let mut fit_points = Vec::new();
    for &n in &params.grid {
        let mut errs: Vec<f64> = cells
            .iter()
            .zip(&errors)
            .filter(|(&(cn, _), e)| cn == n && e.is_some())
            .map(|(_, e)| e.unwrap())
            .collect();
        if errs.is_empty() {
            medians.insert(n.to_string(), Value::Null);
            continue;
        }
        errs.sort_by(|a, b| a.total_cmp(b));
        let med = median(&errs);
        medians.insert(n.to_string(), num(med));
        fit_points.push((n as f64, med));
    }
    fit_points.sort_by(|a, b| a.0.total_cmp(&b.0));
    fit_points.dedup_by(|a, b| a.0 == b.0);
    let slope = loglog_slope(&fit_points);

    let mut metadata = Map::new();
    metadata.insert("grid".into(), json!(params.grid));
    metadata.insert("p".into(), num(params.p));
    metadata.insert("replicates".into(), json!(params.seeds.len()));
    metadata.insert("seeds".into(), json!(params.seeds));
    metadata.insert("target".into(), json!(params.target));
    metadata.insert("median_err".into(), Value::Object(medians));
    metadata.insert("slope".into(), slope.map_or(Value::Null, num));
    metadata.insert("skipped_disconnected".into(), json!(skipped));
    metadata.insert("wall_time_s".into(), num(start.elapsed().as_secs_f64()));
    Ok(ExperimentResult::new(metadata, table))
}
