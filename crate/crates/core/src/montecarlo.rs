//! Direct random-walk simulation, the independent oracle for hitting times
//! and short-horizon hit probabilities.

use crate::error::{Error, Result};
use crate::graph::ErGraph;
use crate::rng::derive_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

const PURPOSE_HITTING: u64 = 1;
const PURPOSE_TWO_STEP: u64 = 2;

/// Recommended step cap, 100 n log n. Hitting times concentrate near n, so
/// a walk this long signals a bug or a pathological graph.
pub fn default_cap(n: usize) -> u64 {
    (100.0 * n as f64 * (n as f64).ln()).ceil() as u64
}

/// Sample statistics of first-arrival times over independent walk trials.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct WalkSample {
    pub origin: usize,
    pub target: usize,
    pub trials: u64,
    pub mean_hit: f64,
    /// Sample standard deviation / sqrt(trials); 0 when trials == 1.
    pub stderr: f64,
    /// Empirical probability of arriving within two steps.
    pub hit_within_2: f64,
    pub seed: u64,
}

fn check_pair(g: &ErGraph, w: usize, v: usize) -> Result<()> {
    if w >= g.n() || v >= g.n() {
        return Err(Error::InvalidParameter(format!(
            "vertex pair ({w}, {v}) out of range for n = {}",
            g.n()
        )));
    }
    Ok(())
}

/// One walk from `w` until it first reaches `v`, counting steps. Each trial
/// runs its own ChaCha8 stream derived from (seed, origin, target, trial),
/// so trials are order-independent and safely parallel.
fn walk_once(
    lists: &[Vec<u32>],
    w: usize,
    v: usize,
    trial: u64,
    seed: u64,
    cap: u64,
) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
        seed,
        &[PURPOSE_HITTING, w as u64, v as u64, trial],
    ));
    let mut current = w;
    let mut steps = 0u64;
    while current != v {
        let neighbors = &lists[current];
        current = neighbors[rng.gen_range(0..neighbors.len())] as usize;
        steps += 1;
        if steps > cap {
            return Err(Error::CapExceeded {
                origin: w,
                target: v,
                trial,
                cap,
            });
        }
    }
    Ok(steps)
}

/// Simulates `trials` independent walks from `w` and aggregates their
/// first-arrival times at `v`. A walk running past `cap` steps aborts the
/// whole call; samples are never truncated silently.
pub fn sample_hitting(
    g: &ErGraph,
    w: usize,
    v: usize,
    trials: u64,
    seed: u64,
    cap: u64,
) -> Result<WalkSample> {
    check_pair(g, w, v)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if !g.reachable_from(v).contains(w) {
        return Err(Error::UnreachableTarget { target: v, vertex: w });
    }
    let lists = g.neighbor_lists();
    let outcomes: Vec<Result<u64>> = (0..trials)
        .into_par_iter()
        .map(|t| walk_once(lists, w, v, t, seed, cap))
        .collect();
    let mut samples = Vec::with_capacity(trials as usize);
    for outcome in outcomes {
        samples.push(outcome?);
    }
    // fixed-order reduction keeps results bit-stable for a given seed
    let mean_hit = samples.iter().map(|&s| s as f64).sum::<f64>() / trials as f64;
    let stderr = if trials > 1 {
        let var = samples
            .iter()
            .map(|&s| {
                let d = s as f64 - mean_hit;
                d * d
            })
            .sum::<f64>()
            / (trials - 1) as f64;
        (var / trials as f64).sqrt()
    } else {
        0.0
    };
    let hit_within_2 = samples.iter().filter(|&&s| s <= 2).count() as f64 / trials as f64;
    Ok(WalkSample {
        origin: w,
        target: v,
        trials,
        mean_hit,
        stderr,
        hit_within_2,
        seed,
    })
}

/// Fraction of two-step walks from `w` that sit at `v` after step 1 or 2.
pub fn empirical_two_step(
    g: &ErGraph,
    w: usize,
    v: usize,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    check_pair(g, w, v)?;
    if w == v {
        return Err(Error::InvalidParameter(
            "two-step probability needs a start distinct from the target".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if g.degree(w) == 0 {
        return Err(Error::InvalidParameter(format!("vertex {w} is isolated")));
    }
    let lists = g.neighbor_lists();
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                seed,
                &[PURPOSE_TWO_STEP, w as u64, v as u64, t],
            ));
            let first = lists[w][rng.gen_range(0..lists[w].len())] as usize;
            if first == v {
                return 1u64;
            }
            let second = lists[first][rng.gen_range(0..lists[first].len())] as usize;
            (second == v) as u64
        })
        .sum();
    Ok(hits as f64 / trials as f64)
}
