use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("flat metric undefined for the zero differential")]
    UndefinedMetric,

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "Newton iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("solution not accepted: residual {residual:e} exceeds tolerance {tol:e}")]
    NotAccepted { residual: f64, tol: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("point {0} lies outside the admissible region")]
    OutsideRegion(String),

    #[error("point with nonpositive third coordinate {0:e} cannot be placed in the chart")]
    ChartOverflow(f64),

    #[error("empty boundary")]
    EmptyBoundary,

    #[error("degenerate hull with {0} vertices")]
    DegenerateHull(usize),

    #[error("transform image is not properly convex in any tested chart")]
    NotProperlyConvex,

    #[error("structure error: {0}")]
    Structure(String),

    #[error("descent test at word {word} is within the resolution {quantum:e} of a wall; tighten the tolerance")]
    Resolution { word: String, quantum: f64 },

    #[error("patch is disconnected")]
    DisconnectedPatch,

    #[error("mismatched samples: {0}")]
    SampleMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
