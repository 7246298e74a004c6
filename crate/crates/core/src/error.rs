use thiserror::Error;

pub type Result<T, E = HgeoError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HgeoError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid symbol: {0}")]
    Semantic(String),

    #[error("atom at angle {angle} lies on the sampling grid (offset {offset}); shift the grid offset")]
    AtomOnGrid { angle: f64, offset: u8 },

    #[error("evaluation at a singular atom (angle {angle})")]
    EvaluationAtAtom { angle: f64 },

    #[error("symbol is not invertible in L^inf: grid minimum {min:.3e} at t = {location:.6}")]
    NotInvertible { min: f64, location: f64 },

    #[error("symbol is not unimodular: max ||f| - 1| = {defect:.3e}")]
    NotUnimodular { defect: f64 },

    #[error("series is not real-valued: max |c_-k - conj(c_k)| = {defect:.3e}")]
    NotReal { defect: f64 },

    #[error("insufficient bandwidth: relative leakage {leakage:.3e} beyond |k| = {bandwidth}")]
    InsufficientBandwidth { leakage: f64, bandwidth: usize },

    #[error("boundary zero at {re:.6}{im:+.6}i: not invertible, factorization ill-conditioned")]
    BoundaryZero { re: f64, im: f64 },

    #[error("grid too coarse: phase step {step:.3} between adjacent points exceeds {limit:.3}")]
    GridTooCoarse { step: f64, limit: f64 },

    #[error("truncation too small / symbol too rough: idempotency defect {defect:.3e}")]
    TruncationTooSmall { defect: f64 },

    #[error("no geodesic: dim Ran P ∩ ker Q = {ran_p_ker_q}, dim Ran Q ∩ ker P = {ran_q_ker_p}")]
    Obstruction {
        ran_p_ker_q: usize,
        ran_q_ker_p: usize,
    },

    #[error("||P - Q|| = {distance:.6} too close to 1 for the logarithm route; use the Halmos route")]
    LogRouteRefused { distance: f64 },

    #[error("theta is not an argument of phi * conj(psi) on the grid: defect {defect:.3e}")]
    NotAnArgument { defect: f64 },

    #[error("no consensus: {0}")]
    NoConsensus(String),

    #[error("unclassifiable: {0}")]
    Unclassifiable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: String, iterations: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl HgeoError {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            HgeoError::Syntax { .. } | HgeoError::Semantic(_) => 2,
            HgeoError::NonConvergence { .. } => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for HgeoError {
    fn from(e: std::io::Error) -> Self {
        HgeoError::Io(e.to_string())
    }
}

impl From<csv::Error> for HgeoError {
    fn from(e: csv::Error) -> Self {
        HgeoError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for HgeoError {
    fn from(e: serde_json::Error) -> Self {
        HgeoError::Io(e.to_string())
    }
}
