//! Scoring candidate node pairs with trained embeddings.
//!
//! Formation candidates are the ordered non-edges of the current snapshot;
//! dissolution candidates are its edges. Three prediction modes combine the
//! formation and dissolution bilinear scores.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::{hermitian_score, sigmoid, EmbeddingState};
use crate::error::{Error, Result};
use crate::graph::{NodeId, Task, TemporalNetwork};

/// How the two relation scores are combined into one prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PredictionMode {
    /// Formation predicts with `sigma(s_f)` alone, dissolution with `sigma(s_d)`.
    Simple,
    /// Both tasks predict with `sigma(s_f + s_d)`: nodes busy rewiring are
    /// likely to form and dissolve at once.
    Additive,
    /// Formation predicts with `sigma(s_f - s_d)`, dissolution with
    /// `sigma(s_d - s_f)`.
    Subtractive,
}

impl PredictionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PredictionMode::Simple => "simple",
            PredictionMode::Additive => "additive",
            PredictionMode::Subtractive => "subtractive",
        }
    }
}

impl FromStr for PredictionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "simple" => Ok(PredictionMode::Simple),
            "additive" => Ok(PredictionMode::Additive),
            "subtractive" => Ok(PredictionMode::Subtractive),
            other => Err(Error::InvalidConfig(format!(
                "unknown prediction mode `{other}` (expected simple, additive, or subtractive)"
            ))),
        }
    }
}

/// A scored candidate pair, optionally labeled with ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPrediction {
    pub i: NodeId,
    pub j: NodeId,
    pub score: f64,
    pub task: Task,
    pub label: Option<bool>,
}

/// Probability-scale score of a single pair for the given task and mode.
pub fn score_pair(
    state: &EmbeddingState,
    i: NodeId,
    j: NodeId,
    task: Task,
    mode: PredictionMode,
) -> f64 {
    sigmoid(raw_pair_score(state, i, j, task, mode))
}

/// The pre-sigmoid bilinear combination; rankings by raw and sigmoid scores
/// coincide because the sigmoid is strictly monotone.
pub fn raw_pair_score(
    state: &EmbeddingState,
    i: NodeId,
    j: NodeId,
    task: Task,
    mode: PredictionMode,
) -> f64 {
    assert_ne!(i, j, "candidate pairs must have distinct endpoints");
    let s_f = hermitian_score(&state.v_f[i.index()], &state.theta_f, &state.v_f[j.index()]);
    let s_d = hermitian_score(&state.v_d[i.index()], &state.theta_d, &state.v_d[j.index()]);
    match (mode, task) {
        (PredictionMode::Simple, Task::Formation) => s_f,
        (PredictionMode::Simple, Task::Dissolution) => s_d,
        (PredictionMode::Additive, _) => s_f + s_d,
        (PredictionMode::Subtractive, Task::Formation) => s_f - s_d,
        (PredictionMode::Subtractive, Task::Dissolution) => s_d - s_f,
    }
}

/// Candidate pairs for a task at origin `t`: every ordered non-self pair
/// absent from `G_t` for formation, every edge of `G_t` for dissolution.
/// Ordered by `(i, j)`.
pub fn candidate_pairs(
    net: &TemporalNetwork,
    t: usize,
    task: Task,
) -> Result<Vec<(NodeId, NodeId)>> {
    let snap = net.snapshot(t)?;
    let n = net.node_count() as u32;
    match task {
        Task::Formation => {
            let mut out = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j && !snap.has_edge(NodeId(i), NodeId(j)) {
                        out.push((NodeId(i), NodeId(j)));
                    }
                }
            }
            Ok(out)
        }
        Task::Dissolution => Ok(snap.edges().collect()),
    }
}

/// Scores and ranks every candidate pair, descending by score with ties
/// broken by `(i, j)` order for determinism.
pub fn rank_predictions(
    state: &EmbeddingState,
    net: &TemporalNetwork,
    t: usize,
    task: Task,
    mode: PredictionMode,
) -> Result<Vec<RankedPrediction>> {
    if state.num_nodes() != net.node_count() {
        return Err(Error::NodeSetMismatch {
            state_nodes: state.num_nodes(),
            net_nodes: net.node_count(),
        });
    }
    let mut ranked: Vec<RankedPrediction> = candidate_pairs(net, t, task)?
        .into_iter()
        .map(|(i, j)| RankedPrediction {
            i,
            j,
            score: score_pair(state, i, j, task, mode),
            task,
            label: None,
        })
        .collect();
    sort_ranked(&mut ranked);
    Ok(ranked)
}

/// Descending by score, then ascending `(i, j)`.
pub fn sort_ranked(ranked: &mut [RankedPrediction]) {
    ranked.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.i.cmp(&b.i))
            .then(a.j.cmp(&b.j))
    });
}
