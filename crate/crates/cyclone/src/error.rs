use std::io;

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: need n > d >= 1, got n={n}, d={d}")]
    InvalidDimensions { n: u32, d: u32 },
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("invalid face: {0}")]
    InvalidFace(String),
    #[error("invalid gap: label {gap} belongs to the face")]
    InvalidGap { gap: u32 },
    #[error("invalid circuit support: {0}")]
    InvalidCircuit(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("flip precondition failed: {0}")]
    FlipPrecondition(String),
    #[error("incompatible GKZ vectors: length {left} vs {right}")]
    IncompatibleVectors { left: usize, right: usize },
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),
    #[error("completeness violation: {0}")]
    CompletenessViolation(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("poset structure violation: {0}")]
    Structure(String),
    #[error("checkpoint format error: {0}")]
    CheckpointFormat(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
