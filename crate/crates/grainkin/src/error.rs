use thiserror::Error;

/// Errors produced by grid construction, operator evaluation and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A time integration blew up (NaN or |sample| > 1e12). Carries the last
    /// time at which the state was still finite.
    #[error("solver diverged; last good time t = {last_good_t}")]
    Diverged { last_good_t: f64 },

    /// A probability-like evolution produced samples below the explicit-scheme
    /// tolerance -1e-8.
    #[error("positivity violated at t = {t}: min sample {min_sample:.3e}")]
    PositivityViolated { t: f64, min_sample: f64 },

    /// Steady-profile iteration exhausted its step budget. The best iterate is
    /// carried so callers can inspect how close the run got.
    #[error("not converged: residual {residual:.3e} >= tol {tol:.3e} after t = {elapsed}")]
    NotConverged {
        residual: f64,
        tol: f64,
        elapsed: f64,
        best: Box<crate::selfsim::SteadyProfile>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
