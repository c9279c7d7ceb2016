use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("coordinate {0} exceeds the supported magnitude 2^30")]
    CoordinateOverflow(i64),

    #[error("duplicate lattice point {0}")]
    DuplicatePoint(String),

    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(VertexId, VertexId),

    #[error("image is not connected")]
    Disconnected,

    #[error("vertices {0} and {1} lie in different components")]
    DisconnectedPair(VertexId, VertexId),

    #[error("image has vertices without lattice coordinates")]
    NotCoordinateBacked,

    #[error("mapping is not continuous")]
    NotContinuous,

    #[error("mapping is not a self-map")]
    NotSelfMap,

    #[error("mapping length {found} does not match source size {expected}")]
    MappingLength { expected: usize, found: usize },

    #[error("image too large: {0} vertices")]
    TooLarge(usize),

    #[error("seed set is not a freezing set")]
    SeedNotFreezing,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
