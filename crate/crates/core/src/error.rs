use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("out of range: {0}")]
    Range(String),
    #[error("invalid placement: {0}")]
    Placement(String),
    #[error("scalar mode mismatch: {0}")]
    Mode(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("quadrature did not converge: {0}")]
    Accuracy(String),
    #[error("invalid tiling: {0}")]
    Validation(String),
    #[error("a-weights on boundary white vertex ({x},{y}) are fixed to 1")]
    BoundaryWeight { x: usize, y: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
