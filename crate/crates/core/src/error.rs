use thiserror::Error;

use crate::math_core::QuadratureResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("quadrature budget exceeded after {} evaluations (best {} ± {})", .best.evaluations, .best.value, .best.error_estimate)]
    BudgetExceeded { best: QuadratureResult<f64> },

    #[error("Taylor order {0} unsupported (maximum is 4)")]
    UnsupportedOrder(usize),

    #[error("field evaluated at a point charge location")]
    Singularity,

    #[error("r/beta = {ratio} is outside the series convergence radius 2*sqrt(2)")]
    OutsideConvergenceRadius { ratio: f64 },

    #[error("no bound state with {nodes} nodes in the energy window ({lo}, {hi})")]
    NoBoundState { nodes: usize, lo: f64, hi: f64 },

    #[error("no self-consistent solution: {0}")]
    NoSolution(String),

    #[error("time step {dt} violates the CFL limit {limit}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("incomplete wave data: {0}")]
    IncompleteData(&'static str),

    #[error("singular velocity at grid index {index:?}")]
    SingularVelocity { index: [usize; 3] },

    #[error("wave function vanishes at grid index {index:?}")]
    WaveNode { index: [usize; 3] },

    #[error("guiding field undefined at t = {t}, r = {position:?}")]
    NodeApproach { t: f64, position: [f64; 3] },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("no crossing found on zeta in [{lo}, {hi}]")]
    NotFound { lo: f64, hi: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            domain,
        }
    }
}
