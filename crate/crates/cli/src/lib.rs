//! Experiment drivers over the `erwalk` library: seeded generation,
//! histogram/scan/CLT experiments, the identity-verification suite, and
//! thin CSV/JSON exporters for the spectral, mixing, and Monte Carlo
//! modules.

pub mod commands;
pub mod config;
pub mod output;
