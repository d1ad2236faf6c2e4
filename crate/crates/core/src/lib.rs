//! Numerical laboratory for random-walk hitting times on dense
//! Erdős–Rényi graphs.
//!
//! The crate generates seeded G(n, p) realizations, solves the absorbing
//! linear system for exact hitting times, evaluates the two-cluster
//! closed-form prediction and its resistance/spectral/quasi-stationary
//! corollaries, and cross-checks everything against direct walk
//! simulation.
//!
//! Modules:
//! - [`graph`]: G(n, p) generation, distance decomposition, degree stats.
//! - [`markov`]: exact hitting times, commute times, effective resistance.
//! - [`theory`]: closed-form predictions, bounds, concentration reports,
//!   envelope calibration.
//! - [`spectral`]: eigendecompositions, the spectral hitting identity,
//!   mixing and contraction diagnostics, quasi-stationary pairs.
//! - [`montecarlo`]: walk simulation as an independent oracle.

pub mod error;
pub mod graph;
pub mod markov;
pub mod montecarlo;
pub mod spectral;
pub mod theory;

mod bits;
mod linalg;
mod rng;

pub use error::{Error, Result};
pub use graph::{decompose, degree_stats, generate_er, DegreeStats, ErGraph, TargetDecomposition};
pub use markov::{
    commute_time, effective_resistance, exact_hitting, exact_hitting_all, hitting_from_measure,
    neighbor_average, HittingVector, NeighborAverage, StationaryDistribution,
};
pub use montecarlo::{default_cap, empirical_two_step, sample_hitting, WalkSample};
pub use spectral::{
    contraction_check, eigen_b, lambda2_adjacency, mixing_norms, perron_deviation,
    quasi_stationary, spectral_hitting, walk_distribution, write_mixing_csv, ContractionCheck,
    MixingNorm, QuasiStationary, SpectralData, WalkDistribution,
};
pub use theory::{
    calibrate_envelope, cheap_bound_check, concentration_report, empirical_edge_probability,
    envelope, lovasz_bounds, max_prediction_error, predict_hitting, predict_hitting_with_p,
    predict_resistance, prediction, prediction_with, two_step_hit_prob, CalibratedEnvelope,
    CalibrationConfig, CheapBound, ConcentrationReport, LovaszBounds, Prediction, TwoStepHitProb,
};
