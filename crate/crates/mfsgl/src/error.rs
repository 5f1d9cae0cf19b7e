use std::path::PathBuf;
use thiserror::Error;

/// Errors produced by dataset handling, graph learning, the solver and the
/// evaluation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileMissing(PathBuf),

    #[error("{path}: parse error at row {row}, column {col}: {msg}")]
    Parse {
        path: PathBuf,
        row: usize,
        col: usize,
        msg: String,
    },

    #[error("view {view}: expected {expected} samples, found {found}")]
    DimensionMismatch {
        view: usize,
        expected: usize,
        found: usize,
    },

    #[error("view {view}: non-finite value at feature {row}, sample {col}")]
    NonFiniteValue {
        view: usize,
        row: usize,
        col: usize,
    },

    #[error("labels: {0}")]
    InvalidLabels(String),

    #[error("mu must be positive, got {0}")]
    InvalidMu(f64),

    #[error("neighbor count k={k} too large for n={n} (need k <= n-2)")]
    KTooLarge { k: usize, n: usize },

    #[error("matrix is not symmetric (max |M - M^T| = {max_asym:.3e})")]
    NotSymmetric { max_asym: f64 },

    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("k-means could not recover from an empty cluster")]
    EmptyClusterUnrecoverable,

    #[error("partition lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("NMI is undefined when a partition has a single cluster")]
    DegenerateSingleCluster,

    #[error("selection size {s} out of range [1, {total}]")]
    InvalidCount { s: usize, total: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
