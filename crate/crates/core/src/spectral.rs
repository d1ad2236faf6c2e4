//! Eigenstructure of the normalized adjacency operator and the adjacency
//! matrix, the spectral hitting-time identity, mixing-rate and contraction
//! diagnostics, and the quasi-stationary identity.

use crate::error::{Error, Result};
use crate::graph::ErGraph;
use crate::linalg::eigh_descending;
use crate::markov::{hitting_from_measure, HittingVector};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::io::Write;

/// Convergence threshold for the power iteration: successive eigenvalue
/// estimates AND the l1 change of the iterate must both drop below this.
/// The eigenvalue estimate alone settles orders of magnitude before the
/// vector does, and the identity defect tracks the vector error.
pub const POWER_ITERATION_TOL: f64 = 1e-12;

/// Iteration budget before the periodicity flag trips.
pub const POWER_ITERATION_CAP: usize = 100_000;

/// Full eigendecomposition of B = D^{-1/2} A D^{-1/2}, plus the extremal
/// eigendata of the adjacency matrix itself.
#[derive(Debug, Clone)]
pub struct SpectralData {
    eigenvalues: Vec<f64>,
    eigenvectors: Array2<f64>,
    lambda1_adjacency: f64,
    lambda2_adjacency: f64,
    perron_vector: Vec<f64>,
}

impl SpectralData {
    /// Eigenvalues of B in descending order; index 0 is 1 on connected
    /// graphs. These equal the eigenvalues of the transition operator
    /// D^{-1}A, which is similar to B.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors of B, column k paired with eigenvalue k.
    pub fn eigenvectors(&self) -> &Array2<f64> {
        &self.eigenvectors
    }

    /// Largest eigenvalue of the adjacency matrix A.
    pub fn lambda1_adjacency(&self) -> f64 {
        self.lambda1_adjacency
    }

    /// The signed eigenvalue of A with the second-largest absolute value.
    pub fn lambda2_adjacency(&self) -> f64 {
        self.lambda2_adjacency
    }

    /// Unit-norm top eigenvector of A, sign-fixed entrywise positive.
    pub fn perron_vector(&self) -> &[f64] {
        &self.perron_vector
    }

    /// CSV serialization: header `k,lambda`, eigenvalues of B descending,
    /// k starting at 1.
    pub fn write_spectrum_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,lambda")?;
        for (k, lambda) in self.eigenvalues.iter().enumerate() {
            writeln!(out, "{},{}", k + 1, lambda)?;
        }
        Ok(())
    }
}

fn check_no_isolated(g: &ErGraph) -> Result<()> {
    if let Some(v) = g.degrees().iter().position(|&d| d == 0) {
        return Err(Error::InvalidParameter(format!("vertex {v} is isolated")));
    }
    Ok(())
}

/// Extremal adjacency eigendata: (lambda1, lambda2 by absolute value, phi).
fn adjacency_extremes(g: &ErGraph) -> Result<(f64, f64, Vec<f64>)> {
    let n = g.n();
    let mut a = Array2::<f64>::zeros((n, n));
    for v in 0..n {
        for u in g.neighbors(v) {
            a[[v, u]] = 1.0;
        }
    }
    let (vals, vecs) = eigh_descending(a)?;
    let lambda1 = vals[0];
    // second-largest |eigenvalue|: compare the runner-up at each end
    let lambda2 = if n == 1 {
        0.0
    } else if vals[1].abs() >= vals[n - 1].abs() {
        vals[1]
    } else {
        vals[n - 1]
    };
    let mut phi: Vec<f64> = vecs.column(0).to_vec();
    if phi.iter().sum::<f64>() < 0.0 {
        for x in &mut phi {
            *x = -*x;
        }
    }
    Ok((lambda1, lambda2, phi))
}

/// Decomposes B = D^{-1/2} A D^{-1/2} and the adjacency matrix.
pub fn eigen_b(g: &ErGraph) -> Result<SpectralData> {
    check_no_isolated(g)?;
    let n = g.n();
    let inv_sqrt: Vec<f64> = g.degrees().iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
    let mut b = Array2::<f64>::zeros((n, n));
    for v in 0..n {
        for u in g.neighbors(v) {
            b[[v, u]] = inv_sqrt[v] * inv_sqrt[u];
        }
    }
    let (eigenvalues, eigenvectors) = eigh_descending(b)?;
    let (lambda1_adjacency, lambda2_adjacency, perron_vector) = adjacency_extremes(g)?;
    Ok(SpectralData {
        eigenvalues,
        eigenvectors,
        lambda1_adjacency,
        lambda2_adjacency,
        perron_vector,
    })
}

/// H_{pi v} from the spectral sum (2|E|/deg v) * sum_{k>=2} u_k(v)^2 / (1 - lambda_k).
pub fn spectral_hitting(g: &ErGraph, v: usize, spec: &SpectralData) -> Result<f64> {
    if v >= g.n() {
        return Err(Error::InvalidParameter(format!(
            "vertex {v} out of range for n = {}",
            g.n()
        )));
    }
    let n = g.n();
    if n >= 2 && spec.eigenvalues[1] >= 1.0 - 1e-8 {
        return Err(Error::InvalidParameter(
            "eigenvalue 1 has multiplicity above 1 (graph is disconnected)".into(),
        ));
    }
    let mut sum = 0.0;
    for k in 1..n {
        let sigma = spec.eigenvectors[[v, k]];
        sum += sigma * sigma / (1.0 - spec.eigenvalues[k]);
    }
    Ok(2.0 * g.edge_count() as f64 / g.degree(v) as f64 * sum)
}

/// The signed adjacency eigenvalue with the second-largest absolute value.
pub fn lambda2_adjacency(g: &ErGraph) -> Result<f64> {
    check_no_isolated(g)?;
    Ok(adjacency_extremes(g)?.1)
}

/// Worst entrywise deviation of the adjacency Perron vector from the
/// constant vector 1/sqrt(n).
pub fn perron_deviation(g: &ErGraph, spec: &SpectralData) -> f64 {
    let uniform = 1.0 / (g.n() as f64).sqrt();
    spec.perron_vector
        .iter()
        .map(|&x| (x - uniform).abs())
        .fold(0.0, f64::max)
}

/// Probability distribution of the walk after a fixed number of steps.
#[derive(Debug, Clone, Serialize)]
pub struct WalkDistribution {
    pub origin: usize,
    pub steps: usize,
    pub mass: Vec<f64>,
}

/// One step of the walk acting on a measure: dst(u) = sum over neighbors w
/// of src(w)/deg(w).
fn walk_step(g: &ErGraph, scaled: &mut [f64], src: &[f64], dst: &mut [f64]) {
    for (w, s) in scaled.iter_mut().enumerate() {
        *s = src[w] / g.degree(w) as f64;
    }
    for (u, d) in dst.iter_mut().enumerate() {
        let mut acc = 0.0;
        for w in g.neighbors(u) {
            acc += scaled[w];
        }
        *d = acc;
    }
}

/// Distribution of the walk started at `v` after exactly `k` steps.
pub fn walk_distribution(g: &ErGraph, v: usize, k: usize) -> Result<WalkDistribution> {
    if v >= g.n() {
        return Err(Error::InvalidParameter(format!(
            "vertex {v} out of range for n = {}",
            g.n()
        )));
    }
    check_no_isolated(g)?;
    let n = g.n();
    let mut mass = vec![0.0; n];
    mass[v] = 1.0;
    let mut scaled = vec![0.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..k {
        walk_step(g, &mut scaled, &mass, &mut next);
        std::mem::swap(&mut mass, &mut next);
    }
    Ok(WalkDistribution { origin: v, steps: k, mass })
}

/// Distance of the k-step distribution from stationarity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MixingNorm {
    pub k: usize,
    pub l2: f64,
    pub l1: f64,
}

/// ||mu_k - pi|| in l2 and l1 for k = 1..=k_max, with mu_0 = delta_v.
pub fn mixing_norms(g: &ErGraph, v: usize, k_max: usize) -> Result<Vec<MixingNorm>> {
    if k_max < 1 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    if v >= g.n() {
        return Err(Error::InvalidParameter(format!(
            "vertex {v} out of range for n = {}",
            g.n()
        )));
    }
    check_no_isolated(g)?;
    let n = g.n();
    let two_e = 2.0 * g.edge_count() as f64;
    let pi: Vec<f64> = g.degrees().iter().map(|&d| d as f64 / two_e).collect();
    let mut mass = vec![0.0; n];
    mass[v] = 1.0;
    let mut scaled = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        walk_step(g, &mut scaled, &mass, &mut next);
        std::mem::swap(&mut mass, &mut next);
        let mut l1 = 0.0;
        let mut l2 = 0.0;
        for (m, p) in mass.iter().zip(&pi) {
            let d = m - p;
            l1 += d.abs();
            l2 += d * d;
        }
        rows.push(MixingNorm { k, l2: l2.sqrt(), l1 });
    }
    Ok(rows)
}

/// CSV serialization of mixing norms: header `k,l1,l2`.
pub fn write_mixing_csv<W: Write>(rows: &[MixingNorm], mut out: W) -> Result<()> {
    writeln!(out, "k,l1,l2")?;
    for row in rows {
        writeln!(out, "{},{},{}", row.k, row.l1, row.l2)?;
    }
    Ok(())
}

/// Largest observed one-step expansion of a mean-zero vector.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContractionCheck {
    pub max_ratio: f64,
}

/// Draws `trials` random mean-zero unit vectors v and returns the largest
/// ||v D^{-1} A||_2 / ||v||_2. Gaussian components, centered then
/// normalized; ChaCha8 keyed by `seed`.
pub fn contraction_check(g: &ErGraph, trials: usize, seed: u64) -> Result<ContractionCheck> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    check_no_isolated(g)?;
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = vec![0.0; n];
    let mut scaled = vec![0.0; n];
    let mut out = vec![0.0; n];
    let mut max_ratio = 0.0f64;
    for _ in 0..trials {
        // Box-Muller pairs
        let mut i = 0;
        while i < n {
            let u1: f64 = 1.0 - rng.gen::<f64>();
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            let theta = 2.0 * std::f64::consts::PI * u2;
            v[i] = r * theta.cos();
            if i + 1 < n {
                v[i + 1] = r * theta.sin();
            }
            i += 2;
        }
        let mean = v.iter().sum::<f64>() / n as f64;
        for x in &mut v {
            *x -= mean;
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        for x in &mut v {
            *x /= norm;
        }
        walk_step(g, &mut scaled, &v, &mut out);
        let image_norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
        max_ratio = max_ratio.max(image_norm);
    }
    Ok(ContractionCheck { max_ratio })
}

/// Perron pair of the transition operator with the target's row and column
/// removed, and the exact identity H_{qsd, v} = 1/(1 - lambda_v).
#[derive(Debug, Clone, Serialize)]
pub struct QuasiStationary {
    pub target: usize,
    pub lambda_v: f64,
    /// Left Perron eigenvector as a probability vector over all n vertices,
    /// with zero mass at the target.
    pub qsd: Vec<f64>,
    pub identity_defect: f64,
}

/// One application of the deleted transition operator to a measure
/// (entries at `target` stay zero; mass stepping onto the target is lost).
fn deleted_step(g: &ErGraph, target: usize, src: &[f64], dst: &mut [f64]) {
    dst.iter_mut().for_each(|x| *x = 0.0);
    for (w, &mass) in src.iter().enumerate() {
        if w == target || mass == 0.0 {
            continue;
        }
        let share = mass / g.degree(w) as f64;
        for u in g.neighbors(w) {
            if u != target {
                dst[u] += share;
            }
        }
    }
}

/// Power iteration for the quasi-stationary pair. Iterates the half-shifted
/// operator (I + Q)/2, which has the same Perron vector as Q but damps
/// period-2 oscillation on near-bipartite deleted chains.
pub fn quasi_stationary(g: &ErGraph, v: usize, hv: &HittingVector) -> Result<QuasiStationary> {
    if g.n() < 3 {
        return Err(Error::InvalidParameter(format!(
            "quasi-stationary distribution needs n >= 3, got {}",
            g.n()
        )));
    }
    if v >= g.n() {
        return Err(Error::InvalidParameter(format!(
            "vertex {v} out of range for n = {}",
            g.n()
        )));
    }
    if hv.target() != v {
        return Err(Error::InvalidParameter(format!(
            "hitting vector targets {}, expected {v}",
            hv.target()
        )));
    }
    let n = g.n();
    let mut mu = vec![1.0 / (n - 1) as f64; n];
    mu[v] = 0.0;
    let mut previous = mu.clone();
    let mut stepped = vec![0.0; n];
    let mut last_estimate = f64::NAN;
    let mut converged = false;
    for _ in 0..POWER_ITERATION_CAP {
        previous.copy_from_slice(&mu);
        deleted_step(g, v, &mu, &mut stepped);
        // mu <- (mu + mu Q) / 2, then renormalize
        let mut mass = 0.0;
        for (m, s) in mu.iter_mut().zip(&stepped) {
            *m = 0.5 * (*m + s);
            mass += *m;
        }
        if mass <= 0.0 {
            return Err(Error::SolverFailure(
                "quasi-stationary iteration lost all mass".into(),
            ));
        }
        let mut change = 0.0;
        for (m, prev) in mu.iter_mut().zip(&previous) {
            *m /= mass;
            change += (*m - prev).abs();
        }
        let lambda_estimate = 2.0 * mass - 1.0;
        if (lambda_estimate - last_estimate).abs() < POWER_ITERATION_TOL
            && change < POWER_ITERATION_TOL
        {
            converged = true;
            break;
        }
        last_estimate = lambda_estimate;
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations: POWER_ITERATION_CAP,
        });
    }
    // final eigenvalue from the unshifted operator on the converged vector
    deleted_step(g, v, &mu, &mut stepped);
    let lambda_v: f64 = stepped.iter().sum();
    let expected = 1.0 / (1.0 - lambda_v);
    let identity_defect = (hitting_from_measure(hv, &mu)? - expected).abs();
    Ok(QuasiStationary {
        target: v,
        lambda_v,
        qsd: mu,
        identity_defect,
    })
}
