//! Crate-wide error type.

use crate::graph::Task;

/// Errors produced by ingestion, training, and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A row of a temporal edge list could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The input contained no usable edges.
    #[error("empty input: no valid edges after dropping self-loops and duplicates")]
    EmptyInput,

    /// A snapshot or transition index was out of range.
    #[error("{what} {value} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    /// An evaluation task had no positive or no negative labels, so AUC is undefined.
    #[error("degenerate {task} task at origin {origin}: {positives} positives, {negatives} negatives")]
    DegenerateTask {
        task: Task,
        origin: usize,
        positives: usize,
        negatives: usize,
    },

    /// AUC was requested for a score set containing only one class.
    #[error("AUC undefined: {positives} positives, {negatives} negatives")]
    AucUndefined { positives: usize, negatives: usize },

    /// Training produced a non-finite loss or runaway parameters.
    #[error("training diverged at epoch {epoch}: {message}")]
    Diverged { epoch: usize, message: String },

    /// A configuration value violated its documented constraints.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A trained model and a network disagree on the node set.
    #[error("node set mismatch: model has {state_nodes} nodes, network has {net_nodes}")]
    NodeSetMismatch { state_nodes: usize, net_nodes: usize },

    /// The rolling-origin leakage check found rows that depend on future snapshots.
    #[error("leakage detected at origin {origin}: rows differ after truncating the dataset at t+1")]
    Leakage { origin: usize },

    /// A model file could not be read or had an unsupported format.
    #[error("model file error: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
