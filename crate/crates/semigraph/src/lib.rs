//! SemiGraph: semi-supervised graph embeddings for dynamic link prediction.
//!
//! Given a sequence of directed network snapshots, this crate learns
//! complex-valued node embeddings that jointly fit (a) a supervised bilinear
//! model of which links formed and dissolved in the past and (b) a
//! Skipgram-style model of neighborhood context in the current network. The
//! trained embeddings score candidate pairs for the next transition — which
//! absent links will form, and which present links will dissolve — and are
//! benchmarked against classic heuristics (Adamic-Adar, preferential
//! attachment, last time of linkage) with rank-based AUC.
//!
//! The `examples/` directory has one runnable example per capability; start
//! with `compare_methods`. The `semigraph` binary exposes the same
//! functionality as subcommands (`ingest`, `synth`, `train`, `predict`,
//! `evaluate`, `rolling`, `sweep`).

pub mod baselines;
pub mod embedding;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod harness;
pub mod prediction;
pub mod sampling;
pub mod synth;
pub mod training;

pub use error::{Error, Result};
pub use graph::{NodeId, Snapshot, Task, TemporalNetwork, TransitionPair};
