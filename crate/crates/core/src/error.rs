//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("parity error: {0}")]
    Parity(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("dimension error: {0}")]
    Dim(String),
    #[error("degenerate frame: {0}")]
    Frame(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("unknown name: {0}")]
    Unknown(String),
    #[error("calibration failure: {0}")]
    Calibration(String),
    #[error("endpoint mismatch: {0}")]
    Endpoint(String),
    #[error("invalid solver settings: {0}")]
    Solver(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
