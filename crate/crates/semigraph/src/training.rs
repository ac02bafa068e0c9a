//! Stochastic gradient training of the semi-supervised objectives.
//!
//! Two objectives are optimized over disjoint parameter sets: the formation
//! objective `L_f = L_fs + lambda_f * L_fu` over `(v_f, u_f, theta_f)` and
//! the dissolution objective `L_d = L_ds + lambda_d * L_du` over
//! `(v_d, u_d, theta_d)`. Each epoch interleaves all active sample sources
//! in one globally shuffled stream and ascends the per-sample log-likelihood
//! `log sigmoid(gamma * score)` with rate `eta1` for vectors and `eta2` for
//! phase angles, both decayed linearly over the planned sample count.
//!
//! Gradients are closed-form (see [`sample_gradient`]); the test suite pins
//! them against central finite differences.

use std::io::Write;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::{
    context_score, hermitian_score, init_state, log_sigmoid, sigmoid, ComplexVec, EmbeddingState,
};
use crate::error::{Error, Result};
use crate::graph::{Task, TemporalNetwork};
use crate::sampling::{
    deep_walk_contexts, negative_samples, positive_transition_pairs, LossTerm, TrainingSample,
    WalkConfig,
};

/// Which loss terms participate in training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrainMode {
    /// Supervised and context terms, with the context terms weighted by lambda.
    SemiGraph,
    /// Supervised terms only.
    SupervisedOnly,
    /// Context (Skipgram) terms only, at weight 1.
    EmbeddingOnly,
}

impl TrainMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TrainMode::SemiGraph => "semigraph",
            TrainMode::SupervisedOnly => "supervised",
            TrainMode::EmbeddingOnly => "graphemb",
        }
    }
}

impl std::str::FromStr for TrainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "semigraph" => Ok(TrainMode::SemiGraph),
            "supervised" | "supervised-only" => Ok(TrainMode::SupervisedOnly),
            "graphemb" | "embedding-only" => Ok(TrainMode::EmbeddingOnly),
            other => Err(Error::InvalidConfig(format!(
                "unknown training mode `{other}` (expected semigraph, supervised, or graphemb)"
            ))),
        }
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Embedding dimension d.
    pub dim: usize,
    /// Weight of the formation context loss.
    pub lambda_f: f64,
    /// Weight of the dissolution context loss.
    pub lambda_d: f64,
    /// Base learning rate for all vector blocks.
    pub eta1: f64,
    /// Base learning rate for the phase angles.
    pub eta2: f64,
    /// Past transitions to learn from; `None` means all available (p = t).
    pub past_window: Option<usize>,
    pub epochs: usize,
    /// Negatives drawn per positive; 0 disables negative sampling.
    pub k_neg: usize,
    pub walk: WalkConfig,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 3,
            lambda_f: 0.05,
            lambda_d: 0.05,
            eta1: 0.05,
            eta2: 5e-6,
            past_window: None,
            epochs: 50,
            k_neg: 5,
            walk: WalkConfig::default(),
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::InvalidConfig("dim must be at least 1".into()));
        }
        if self.lambda_f < 0.0 || self.lambda_d < 0.0 {
            return Err(Error::InvalidConfig("lambda must be non-negative".into()));
        }
        if self.eta1 <= 0.0 || self.eta2 <= 0.0 {
            return Err(Error::InvalidConfig("learning rates must be positive".into()));
        }
        if self.epochs < 1 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        self.walk.validate()
    }
}

/// Per-epoch running averages of the four log-likelihood terms and the
/// combined objectives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochLoss {
    pub epoch: usize,
    pub l_fs: f64,
    pub l_fu: f64,
    pub l_f: f64,
    pub l_ds: f64,
    pub l_du: f64,
    pub l_d: f64,
}

/// Loss trajectory over a training run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub epochs: Vec<EpochLoss>,
}

impl LossReport {
    /// Writes the `epoch,L_fs,L_fu,L_f,L_ds,L_du,L_d` metrics CSV.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "epoch,L_fs,L_fu,L_f,L_ds,L_du,L_d")?;
        for row in &self.epochs {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                row.epoch, row.l_fs, row.l_fu, row.l_f, row.l_ds, row.l_du, row.l_d
            )?;
        }
        Ok(())
    }
}

/// Log-likelihood `log sigmoid(gamma * score)` of one sample under the
/// current state. Supervised terms score through the phase matrix of their
/// relation; context terms use the phase-free context score against the `u`
/// block.
pub fn sample_loglik(state: &EmbeddingState, s: &TrainingSample) -> f64 {
    log_sigmoid(s.gamma * raw_score(state, s))
}

fn raw_score(state: &EmbeddingState, s: &TrainingSample) -> f64 {
    let (i, j) = (s.i.index(), s.j.index());
    match s.term {
        LossTerm::FormationSupervised => hermitian_score(&state.v_f[i], &state.theta_f, &state.v_f[j]),
        LossTerm::DissolutionSupervised => {
            hermitian_score(&state.v_d[i], &state.theta_d, &state.v_d[j])
        }
        LossTerm::FormationContext => context_score(&state.v_f[i], &state.u_f[j]),
        LossTerm::DissolutionContext => context_score(&state.v_d[i], &state.u_d[j]),
    }
}

/// Sparse gradient of one sample's log-likelihood.
///
/// `left` is the gradient w.r.t. the node vector `v_{.i}`; `right` is the
/// gradient w.r.t. `v_{.j}` (supervised) or `u_{.c}` (context); `phase` is
/// the gradient w.r.t. the relation's angles, present only for supervised
/// samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGradient {
    pub term: LossTerm,
    pub i: crate::graph::NodeId,
    pub j: crate::graph::NodeId,
    pub left: ComplexVec,
    pub right: ComplexVec,
    pub phase: Option<Vec<f64>>,
    /// Log-likelihood at the point the gradient was taken.
    pub loglik: f64,
}

/// Closed-form gradient of `log sigmoid(gamma * score)`.
///
/// With `g = gamma * sigmoid(-gamma * score)` and per-dimension components
/// `v_i = a + ib`, `v_j = c + id`, the supervised score expands to
/// `cos(theta)(ac + bd) + sin(theta)(ad - bc)`, giving
///
/// ```text
/// d/da = g (cos c + sin d)         d/dc = g (cos a - sin b)
/// d/db = g (cos d - sin c)         d/dd = g (cos b + sin a)
/// d/dtheta = g (-sin (ac + bd) + cos (ad - bc))
/// ```
///
/// Context samples drop the phase entirely: `d/da = g c`, `d/db = g d`,
/// `d/dc = g a`, `d/dd = g b`.
pub fn sample_gradient(state: &EmbeddingState, s: &TrainingSample) -> SampleGradient {
    let d = state.dim;
    let (i, j) = (s.i.index(), s.j.index());
    let mut left = ComplexVec::zeros(d);
    let mut right = ComplexVec::zeros(d);

    match s.term {
        LossTerm::FormationSupervised | LossTerm::DissolutionSupervised => {
            let (vs, phase) = if s.term == LossTerm::FormationSupervised {
                (&state.v_f, &state.theta_f)
            } else {
                (&state.v_d, &state.theta_d)
            };
            let (vi, vj) = (&vs[i], &vs[j]);
            let score = hermitian_score(vi, phase, vj);
            let g = s.gamma * sigmoid(-s.gamma * score);
            let mut dtheta = vec![0.0; d];
            for k in 0..d {
                let (cos, sin) = phase.cos_sin(k);
                let (a, b) = (vi.re[k], vi.im[k]);
                let (c, dd) = (vj.re[k], vj.im[k]);
                left.re[k] = g * (cos * c + sin * dd);
                left.im[k] = g * (cos * dd - sin * c);
                right.re[k] = g * (cos * a - sin * b);
                right.im[k] = g * (cos * b + sin * a);
                dtheta[k] = g * (-sin * (a * c + b * dd) + cos * (a * dd - b * c));
            }
            SampleGradient {
                term: s.term,
                i: s.i,
                j: s.j,
                left,
                right,
                phase: Some(dtheta),
                loglik: log_sigmoid(s.gamma * score),
            }
        }
        LossTerm::FormationContext | LossTerm::DissolutionContext => {
            let (vs, us) = if s.term == LossTerm::FormationContext {
                (&state.v_f, &state.u_f)
            } else {
                (&state.v_d, &state.u_d)
            };
            let (vi, uc) = (&vs[i], &us[j]);
            let score = context_score(vi, uc);
            let g = s.gamma * sigmoid(-s.gamma * score);
            for k in 0..d {
                left.re[k] = g * uc.re[k];
                left.im[k] = g * uc.im[k];
                right.re[k] = g * vi.re[k];
                right.im[k] = g * vi.im[k];
            }
            SampleGradient {
                term: s.term,
                i: s.i,
                j: s.j,
                left,
                right,
                phase: None,
                loglik: log_sigmoid(s.gamma * score),
            }
        }
    }
}

/// Ascends one sample's log-likelihood in place. Vector rows move by
/// `eta1 * weight * grad`; phase angles (supervised samples only) move by
/// `eta2 * weight * grad`.
pub fn apply_gradient(
    state: &mut EmbeddingState,
    grad: &SampleGradient,
    eta1: f64,
    eta2: f64,
    weight: f64,
) {
    let (i, j) = (grad.i.index(), grad.j.index());
    let d = state.dim;
    match grad.term {
        LossTerm::FormationSupervised | LossTerm::DissolutionSupervised => {
            let (vs, phase) = if grad.term == LossTerm::FormationSupervised {
                (&mut state.v_f, &mut state.theta_f)
            } else {
                (&mut state.v_d, &mut state.theta_d)
            };
            for k in 0..d {
                vs[i].re[k] += eta1 * weight * grad.left.re[k];
                vs[i].im[k] += eta1 * weight * grad.left.im[k];
                vs[j].re[k] += eta1 * weight * grad.right.re[k];
                vs[j].im[k] += eta1 * weight * grad.right.im[k];
            }
            if let Some(dtheta) = &grad.phase {
                for k in 0..d {
                    phase.theta[k] += eta2 * weight * dtheta[k];
                }
            }
        }
        LossTerm::FormationContext | LossTerm::DissolutionContext => {
            let (vs, us) = if grad.term == LossTerm::FormationContext {
                (&mut state.v_f, &mut state.u_f)
            } else {
                (&mut state.v_d, &mut state.u_d)
            };
            for k in 0..d {
                vs[i].re[k] += eta1 * weight * grad.left.re[k];
                vs[i].im[k] += eta1 * weight * grad.left.im[k];
                us[j].re[k] += eta1 * weight * grad.right.re[k];
                us[j].im[k] += eta1 * weight * grad.right.im[k];
            }
        }
    }
}

struct TermStats {
    sum: f64,
    count: usize,
}

impl TermStats {
    fn new() -> Self {
        TermStats { sum: 0.0, count: 0 }
    }

    fn push(&mut self, loglik: f64) {
        self.sum += loglik;
        self.count += 1;
    }

    fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }
}

/// Trains embeddings at origin `t`: the current network is `G_t` and the
/// supervised targets are the transitions in the past window ending at `t`.
///
/// Per-sample context-term gradients are weighted by `lambda_f`/`lambda_d`
/// in [`TrainMode::SemiGraph`]; a context term whose weight is zero is
/// dropped from the stream entirely, so `SemiGraph` with both lambdas at
/// zero follows the exact same parameter trajectory as
/// [`TrainMode::SupervisedOnly`] under the same seed. Learning rates decay
/// as `eta * max(1 - tau/T, 1e-4)` with `tau` the processed-sample count and
/// `T` the planned total. A past window longer than the available history is
/// clamped to `t`.
pub fn train(
    net: &TemporalNetwork,
    t: usize,
    cfg: &TrainConfig,
    mode: TrainMode,
) -> Result<(EmbeddingState, LossReport)> {
    cfg.validate()?;
    if t == 0 || t >= net.len() {
        return Err(Error::IndexOutOfRange {
            what: "training origin",
            value: t,
            limit: net.len(),
        });
    }
    let num_nodes = net.node_count();
    if num_nodes < 2 {
        return Err(Error::InvalidConfig("need at least two nodes".into()));
    }

    let current = net.snapshot(t)?;
    let p = cfg.past_window.unwrap_or(t).min(t).max(1);
    let transitions = net.window_transitions(t, p)?;
    let fs_pos = positive_transition_pairs(&transitions, Task::Formation);
    let ds_pos = positive_transition_pairs(&transitions, Task::Dissolution);

    let supervised_active = mode != TrainMode::EmbeddingOnly;
    let (fu_weight, du_weight) = match mode {
        TrainMode::SemiGraph => (cfg.lambda_f, cfg.lambda_d),
        TrainMode::SupervisedOnly => (0.0, 0.0),
        TrainMode::EmbeddingOnly => (1.0, 1.0),
    };
    let context_active = fu_weight > 0.0 || du_weight > 0.0;

    let mut state = init_state(num_nodes, cfg.dim, cfg.seed);
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = LossReport::default();
    let mut planned_total: Option<usize> = None;
    let mut processed = 0usize;

    for epoch in 0..cfg.epochs {
        // Sub-seeds are drawn in a fixed order every epoch no matter which
        // sources are active, so ablations share their random streams.
        let walk_seed = master.next_u64();
        let fs_seed = master.next_u64();
        let ds_seed = master.next_u64();
        let fu_seed = master.next_u64();
        let du_seed = master.next_u64();
        let shuffle_seed = master.next_u64();

        let mut stream: Vec<TrainingSample> = Vec::new();
        if supervised_active {
            for &(i, j) in &fs_pos {
                stream.push(TrainingSample::positive(i, j, LossTerm::FormationSupervised));
            }
            if cfg.k_neg > 0 && !fs_pos.is_empty() {
                stream.extend(negative_samples(
                    &fs_pos,
                    LossTerm::FormationSupervised,
                    num_nodes,
                    cfg.k_neg,
                    fs_seed,
                ));
            }
            for &(i, j) in &ds_pos {
                stream.push(TrainingSample::positive(i, j, LossTerm::DissolutionSupervised));
            }
            if cfg.k_neg > 0 && !ds_pos.is_empty() {
                stream.extend(negative_samples(
                    &ds_pos,
                    LossTerm::DissolutionSupervised,
                    num_nodes,
                    cfg.k_neg,
                    ds_seed,
                ));
            }
        }
        if context_active {
            let walk_cfg = WalkConfig { seed: walk_seed, ..cfg.walk.clone() };
            let corpus = deep_walk_contexts(current, num_nodes, &walk_cfg);
            for (&weight, term, seed) in [
                (&fu_weight, LossTerm::FormationContext, fu_seed),
                (&du_weight, LossTerm::DissolutionContext, du_seed),
            ] {
                if weight <= 0.0 {
                    continue;
                }
                for &(i, c) in &corpus {
                    stream.push(TrainingSample::positive(i, c, term));
                }
                if cfg.k_neg > 0 && !corpus.is_empty() {
                    stream.extend(negative_samples(&corpus, term, num_nodes, cfg.k_neg, seed));
                }
            }
        }

        let mut shuffle_rng = ChaCha8Rng::seed_from_u64(shuffle_seed);
        stream.shuffle(&mut shuffle_rng);

        let total = *planned_total.get_or_insert_with(|| (stream.len() * cfg.epochs).max(1));

        let mut fs_stats = TermStats::new();
        let mut ds_stats = TermStats::new();
        let mut fu_stats = TermStats::new();
        let mut du_stats = TermStats::new();

        for sample in &stream {
            let decay = (1.0 - processed as f64 / total as f64).max(1e-4);
            let weight = match sample.term {
                LossTerm::FormationSupervised | LossTerm::DissolutionSupervised => 1.0,
                LossTerm::FormationContext => fu_weight,
                LossTerm::DissolutionContext => du_weight,
            };
            let grad = sample_gradient(&state, sample);
            apply_gradient(&mut state, &grad, cfg.eta1 * decay, cfg.eta2 * decay, weight);
            match sample.term {
                LossTerm::FormationSupervised => fs_stats.push(grad.loglik),
                LossTerm::DissolutionSupervised => ds_stats.push(grad.loglik),
                LossTerm::FormationContext => fu_stats.push(grad.loglik),
                LossTerm::DissolutionContext => du_stats.push(grad.loglik),
            }
            processed += 1;
        }

        let (l_fs, l_ds) = (fs_stats.mean(), ds_stats.mean());
        let (l_fu, l_du) = (fu_stats.mean(), du_stats.mean());
        let row = EpochLoss {
            epoch,
            l_fs,
            l_fu,
            l_f: l_fs + cfg.lambda_f * l_fu,
            l_ds,
            l_du,
            l_d: l_ds + cfg.lambda_d * l_du,
        };
        if !(row.l_f.is_finite() && row.l_d.is_finite()) {
            return Err(Error::Diverged {
                epoch,
                message: "non-finite loss".into(),
            });
        }
        if state.max_abs() > 1e6 {
            return Err(Error::Diverged {
                epoch,
                message: "parameter magnitude exceeded 1e6".into(),
            });
        }
        report.epochs.push(row);
    }

    Ok((state, report))
}
