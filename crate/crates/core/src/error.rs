use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    /// The Green function at `t = 0` is a delta distribution, not a number.
    #[error("green function requested at t = 0 (delta-function limit)")]
    DeltaLimit,

    #[error("singular time: {0}")]
    SingularTime(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// The state does not decay at the edges of its sampling window.
    #[error("state not decayed at grid ends (relative boundary magnitude {boundary:.3e})")]
    Truncation { boundary: f64 },

    /// Phase-space mass left the sampling window.
    #[error("phase-space window too small: lost fraction {lost:.3e} of total mass")]
    Window { lost: f64 },

    #[error("regularized quadrature did not converge (spread {spread:.3e} > {tolerance:.3e})")]
    NonConvergence { spread: f64, tolerance: f64 },

    /// Probability reached the Dirichlet walls of the oracle grid.
    #[error("wavefunction reached the grid boundary (|psi| = {magnitude:.3e})")]
    Reflection { magnitude: f64 },

    #[error("|nu| = {nu:.3e} is below nu_min = {nu_min:.1e}; use the nu = 0 branch")]
    NuTooSmall { nu: f64, nu_min: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
