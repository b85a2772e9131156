use thiserror::Error;

/// Errors raised by the solvers and the threshold searches.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FbError {
    #[error("no positive periodic solution: mean growth {mean_growth:.6e} is not positive")]
    NoPositivePeriodicSolution { mean_growth: f64 },

    #[error(
        "{what} did not converge after {iterations} iterations (last change {last_change:.3e})"
    )]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        last_change: f64,
    },

    #[error("eigenvalue at the minimum length {l_min:.3e} is {lambda1:.6e} <= 0; no bracket for the critical length")]
    BracketFailure { l_min: f64, lambda1: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("ordering violated: {0}")]
    OrderingViolation(String),

    #[error("semi-wave speed collapsed to zero (k = {k:.3e})")]
    CollapseToZero { k: f64 },

    #[error(
        "step size failure at t = {t:.6}: front monitor {monitor:.3e} after {halvings} halvings"
    )]
    StepSizeFailure { t: f64, monitor: f64, halvings: u32 },

    #[error("negative density {value:.3e} at t = {t:.6}")]
    NegativeDensity { t: f64, value: f64 },

    #[error("insufficient data: {have} samples in the fit window, need {need}")]
    InsufficientData { have: usize, need: usize },

    #[error("no transition: every evaluation classified as {verdict}")]
    NoTransition {
        verdict: String,
        evaluations: Vec<(f64, String)>,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid coefficient field: {0}")]
    InvalidField(String),
}

pub type Result<T> = std::result::Result<T, FbError>;
