use alloc::string::String;

use crate::half::HalfInteger;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("tensor dimension {dim} exceeds the dense limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("total spin {0} is not admissible for this chain")]
    NotAdmissible(HalfInteger),
    #[error("diagram does not match the chain: {0}")]
    InconsistentDiagram(String),
    #[error("invalid increment step: {0}")]
    InvalidStep(String),
    #[error("site spin {0} is not supported on this path")]
    UnsupportedSpin(HalfInteger),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
