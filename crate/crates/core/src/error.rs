use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by graph construction, solvers, and samplers.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The graph is disconnected with respect to the requested target.
    #[error("unreachable target: vertex {vertex} cannot reach target {target}")]
    UnreachableTarget { target: usize, vertex: usize },

    /// A dense factorization or solve failed, or the residual stayed above
    /// tolerance after refinement.
    #[error("solver failure: {0}")]
    SolverFailure(String),

    /// The A/B distance dichotomy is undefined: some vertex sits at
    /// distance >= 3 from the target.
    #[error("diameter exceeds 2: vertex {vertex} is at distance >= 3 from target {target}")]
    DiameterExceedsTwo { target: usize, vertex: usize },

    /// A simulated walk ran past the configured step cap. The whole call
    /// aborts rather than silently truncating the sample.
    #[error("step cap {cap} exceeded on trial {trial} of walk {origin} -> {target}")]
    CapExceeded {
        origin: usize,
        target: usize,
        trial: u64,
        cap: u64,
    },

    /// Power iteration failed to settle, typically due to periodicity.
    #[error("power iteration did not converge within {iterations} iterations (periodicity flag)")]
    NonConvergence { iterations: usize },

    /// A graph file could not be parsed.
    #[error("malformed graph file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
