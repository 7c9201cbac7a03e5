use thiserror::Error;

/// Errors raised by curve construction and the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElasticError {
    #[error("a curve needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("invalid parameter breakpoints: {0}")]
    InvalidParams(String),

    #[error("zero-length edge at segment {index}")]
    ZeroEdge { index: usize },

    #[error("curve is not closed: endpoint gap {gap:e} exceeds tolerance {tolerance:e}")]
    NotClosed { gap: f64, tolerance: f64 },

    #[error("elastic parameters must be positive, got a={a}, b={b}")]
    InvalidElastic { a: f64, b: f64 },

    #[error("operation requires 2b >= a, got a={a}, b={b}")]
    ParamRegime { a: f64, b: f64 },

    #[error("segment count mismatch: {left} vs {right}")]
    SegmentMismatch { left: usize, right: usize },

    #[error("partition mismatch between transformed curves")]
    PartitionMismatch,

    #[error("invalid reparameterization: {0}")]
    InvalidReparameterization(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular closure Jacobian (condition number {condition:e})")]
    SingularJacobian { condition: f64 },

    #[error("points are antipodal on the sphere (D = {angle})")]
    Antipodal { angle: f64 },

    #[error("point is off the sphere of radius {radius}: norm {norm}")]
    OffSphere { radius: f64, norm: f64 },

    #[error("closure projection failed at path point {index}: residual {residual:e}")]
    PathProjection { index: usize, residual: f64 },

    #[error("path straightening stalled: energy {energy:e} exceeds bound {bound:e}")]
    StraighteningFailed { energy: f64, bound: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, ElasticError>;
