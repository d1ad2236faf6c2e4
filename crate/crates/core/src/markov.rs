//! Exact hitting times via the absorbing-chain linear system, with the
//! derived quantities: measure-averaged hitting times, commute times, and
//! effective resistance.

use crate::error::{Error, Result};
use crate::graph::ErGraph;
use crate::linalg::LuSystem;
use ndarray::{Array1, Array2};
use rayon::prelude::*;
use std::io::Write;

/// Residual tolerance for the hitting-time solve, scaled by n.
pub const RESIDUAL_TOL_PER_VERTEX: f64 = 1e-9;

/// Tolerance for probability vectors summing to one.
pub const MEASURE_TOL: f64 = 1e-12;

/// Expected steps for a walk from every start vertex to first reach one
/// fixed target. `values[target] == 0` exactly; every other entry solves
/// the one-step harmonic equation to within `residual`.
#[derive(Debug, Clone)]
pub struct HittingVector {
    target: usize,
    values: Vec<f64>,
    residual: f64,
}

impl HittingVector {
    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, w: usize) -> f64 {
        self.values[w]
    }

    /// Max absolute defect of the harmonic equation across non-target
    /// vertices, measured by re-substitution into the graph.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// CSV serialization: header `vertex,hitting_time`, one row per vertex.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "vertex,hitting_time")?;
        for (w, h) in self.values.iter().enumerate() {
            writeln!(out, "{w},{h}")?;
        }
        Ok(())
    }
}

/// The walk's invariant measure pi(w) = deg(w) / (2|E|).
#[derive(Debug, Clone)]
pub struct StationaryDistribution {
    weights: Vec<f64>,
}

impl StationaryDistribution {
    pub fn new(g: &ErGraph) -> Self {
        let two_e = 2.0 * g.edge_count() as f64;
        StationaryDistribution {
            weights: g.degrees().iter().map(|&d| d as f64 / two_e).collect(),
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Max harmonic defect of `h` over all non-target vertices:
/// |h(w) - 1 - mean of h over neighbors of w|.
fn harmonic_residual(g: &ErGraph, target: usize, h: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for w in 0..g.n() {
        if w == target {
            continue;
        }
        let mut acc = 0.0;
        for u in g.neighbors(w) {
            acc += h[u];
        }
        let defect = (h[w] - 1.0 - acc / g.degree(w) as f64).abs();
        worst = worst.max(defect);
    }
    worst
}

/// Residual vector of the restricted system, b - (I - Q) h, indexed over
/// vertices != target. Used for one round of iterative refinement.
fn restricted_residual(g: &ErGraph, target: usize, h: &[f64]) -> Array1<f64> {
    let n = g.n();
    let mut r = Array1::zeros(n - 1);
    for w in 0..n {
        if w == target {
            continue;
        }
        let mut acc = 0.0;
        for u in g.neighbors(w) {
            acc += h[u];
        }
        let iw = if w < target { w } else { w - 1 };
        r[iw] = 1.0 - h[w] + acc / g.degree(w) as f64;
    }
    r
}

fn expand(target: usize, n: usize, restricted: &Array1<f64>) -> Vec<f64> {
    let mut full = vec![0.0; n];
    for (w, h) in full.iter_mut().enumerate() {
        if w != target {
            let iw = if w < target { w } else { w - 1 };
            *h = restricted[iw];
        }
    }
    full
}

/// Solves (I - Q) h = 1 for the expected hitting times of `v`, where Q is
/// the walk's transition operator restricted to the non-target vertices.
///
/// Dense LU with partial pivoting, one round of iterative refinement if the
/// re-substitution residual exceeds `RESIDUAL_TOL_PER_VERTEX * n`. Fails
/// loudly on disconnected graphs rather than returning infinities.
pub fn exact_hitting(g: &ErGraph, v: usize) -> Result<HittingVector> {
    if v >= g.n() {
        return Err(Error::InvalidParameter(format!(
            "target {v} out of range for n = {}",
            g.n()
        )));
    }
    if let Some(vertex) = g.first_unreachable(v) {
        return Err(Error::UnreachableTarget { target: v, vertex });
    }
    let n = g.n();
    let mut a = Array2::<f64>::zeros((n - 1, n - 1));
    for w in 0..n {
        if w == v {
            continue;
        }
        let iw = if w < v { w } else { w - 1 };
        let step = -1.0 / g.degree(w) as f64;
        for u in g.neighbors(w) {
            if u != v {
                let iu = if u < v { u } else { u - 1 };
                a[[iw, iu]] = step;
            }
        }
        a[[iw, iw]] = 1.0;
    }
    let lu = LuSystem::new(a)?;
    let b = Array1::ones(n - 1);
    let mut x = lu.solve(&b)?;

    let tol = RESIDUAL_TOL_PER_VERTEX * n as f64;
    let mut h = expand(v, n, &x);
    let mut residual = harmonic_residual(g, v, &h);
    if residual > tol {
        let r = restricted_residual(g, v, &h);
        let delta = lu.solve(&r)?;
        x += &delta;
        h = expand(v, n, &x);
        residual = harmonic_residual(g, v, &h);
        if residual > tol {
            return Err(Error::SolverFailure(format!(
                "hitting-time residual {residual:.3e} above tolerance {tol:.3e} after refinement"
            )));
        }
    }
    Ok(HittingVector {
        target: v,
        values: h,
        residual,
    })
}

/// Hitting vectors for every target, solved independently and in parallel.
/// On failure the error for the lowest-numbered target is returned,
/// regardless of scheduling.
pub fn exact_hitting_all(g: &ErGraph) -> Result<Vec<HittingVector>> {
    let outcomes: Vec<Result<HittingVector>> = (0..g.n())
        .into_par_iter()
        .map(|v| exact_hitting(g, v))
        .collect();
    outcomes.into_iter().collect()
}

/// Expected hitting time from a start vertex drawn from `mu`.
pub fn hitting_from_measure(hv: &HittingVector, mu: &[f64]) -> Result<f64> {
    if mu.len() != hv.values.len() {
        return Err(Error::InvalidParameter(format!(
            "measure has {} entries, graph has {}",
            mu.len(),
            hv.values.len()
        )));
    }
    let mut total = 0.0;
    for &m in mu {
        if m < 0.0 {
            return Err(Error::InvalidParameter(format!("negative mass {m} in measure")));
        }
        total += m;
    }
    if (total - 1.0).abs() > MEASURE_TOL {
        return Err(Error::InvalidParameter(format!(
            "measure sums to {total}, expected 1 within {MEASURE_TOL}"
        )));
    }
    Ok(mu.iter().zip(&hv.values).map(|(m, h)| m * h).sum())
}

/// Mean hitting time over the neighbors of the target, against its exact
/// closed form 2|E|/deg(v) - 1.
#[derive(Debug, Clone, Copy)]
pub struct NeighborAverage {
    pub value: f64,
    pub predicted: f64,
    pub defect: f64,
}

pub fn neighbor_average(g: &ErGraph, v: usize, hv: &HittingVector) -> Result<NeighborAverage> {
    if hv.target() != v {
        return Err(Error::InvalidParameter(format!(
            "hitting vector targets {}, expected {v}",
            hv.target()
        )));
    }
    let deg = g.degree(v);
    if deg == 0 {
        return Err(Error::InvalidParameter(format!("vertex {v} is isolated")));
    }
    let value = g.neighbors(v).map(|w| hv.value(w)).sum::<f64>() / deg as f64;
    let predicted = 2.0 * g.edge_count() as f64 / deg as f64 - 1.0;
    Ok(NeighborAverage {
        value,
        predicted,
        defect: (value - predicted).abs(),
    })
}

/// Round-trip expectation kappa(v, w) = H_wv + H_vw from two exact solves.
pub fn commute_time(g: &ErGraph, v: usize, w: usize) -> Result<f64> {
    if v == w {
        return Err(Error::InvalidParameter(format!(
            "commute time needs two distinct vertices, got {v}"
        )));
    }
    let to_v = exact_hitting(g, v)?;
    let to_w = exact_hitting(g, w)?;
    Ok(to_v.value(w) + to_w.value(v))
}

/// Electrical resistance between v and w with unit resistors on edges:
/// kappa(v, w) / (2|E|).
pub fn effective_resistance(g: &ErGraph, v: usize, w: usize) -> Result<f64> {
    Ok(commute_time(g, v, w)? / (2.0 * g.edge_count() as f64))
}
