use alloc::string::String;

/// Errors produced by graph construction and the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} is out of range")]
    InvalidVertex(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid graph: {0}")]
    Violation(crate::graph::Violation),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generation labels are absent")]
    MissingGenerations,
    #[error("graph carries no faces, it is not a tessellation patch")]
    NotTessellation,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("graph with {0} vertices is too large to materialise")]
    TooLarge(u64),
    #[error("empty domain: {0}")]
    EmptyDomain(&'static str),
    #[error("vertex {0} lies on the truncation boundary")]
    NotInterior(usize),
    #[error("vertex set is not connected")]
    Disconnected,
    #[error("dimension {dim} exceeds the dense threshold {threshold}")]
    DenseTooLarge { dim: usize, threshold: usize },
    #[error("vector is zero")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Lanczos did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("tessellation growth failed: {0}")]
    Tessellation(String),
}

pub type Result<T> = core::result::Result<T, Error>;
