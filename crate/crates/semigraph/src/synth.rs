//! Synthetic dynamic networks with planted rewiring structure.
//!
//! The generator starts from a directed planted-partition graph and rewires
//! a fixed fraction of edges per step. Churn is a rewiring process graded by
//! community: within-community pairs of community `c` both form and dissolve
//! with a weight that falls linearly from `churn_asymmetry` (community 0)
//! to 1 (the last community), and between-community pairs churn at weight 1.
//! Formation refills each weight class with exactly as many edges as it
//! lost, so the class composition and the total edge count stay stationary
//! and both transition tasks carry correlated signal that is a function of
//! community identity.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, NodeId, TemporalNetwork};

/// Generator parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub num_nodes: usize,
    pub num_communities: usize,
    pub snapshots: usize,
    /// Initial link probability for within-community ordered pairs.
    pub p_in: f64,
    /// Initial link probability for between-community ordered pairs.
    pub p_out: f64,
    /// Fraction of existing edges rewired per step, in (0, 1).
    pub rewire_rate: f64,
    /// Churn weight (>= 1) of the most active community; community `c`
    /// rewires with weight interpolating linearly from this value down to 1,
    /// and between-community pairs churn at weight 1. 1 means uniform churn.
    pub churn_asymmetry: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            num_nodes: 200,
            num_communities: 4,
            snapshots: 8,
            p_in: 0.2,
            p_out: 0.02,
            rewire_rate: 0.15,
            churn_asymmetry: 12.0,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_nodes < 2 {
            return Err(Error::InvalidConfig("num_nodes must be at least 2".into()));
        }
        if self.num_communities < 1 || self.num_communities > self.num_nodes {
            return Err(Error::InvalidConfig(
                "num_communities must be in 1..=num_nodes".into(),
            ));
        }
        if self.snapshots < 3 {
            return Err(Error::InvalidConfig("snapshots must be at least 3".into()));
        }
        if !(0.0..=1.0).contains(&self.p_in) || !(0.0..=1.0).contains(&self.p_out) {
            return Err(Error::InvalidConfig("probabilities must lie in [0, 1]".into()));
        }
        if !(self.rewire_rate > 0.0 && self.rewire_rate < 1.0) {
            return Err(Error::InvalidConfig("rewire_rate must lie in (0, 1)".into()));
        }
        if self.churn_asymmetry < 1.0 {
            return Err(Error::InvalidConfig("churn_asymmetry must be at least 1".into()));
        }
        let n = self.num_nodes as f64;
        let within = within_pair_count(self.num_nodes, self.num_communities) as f64;
        let expected = within * self.p_in + (n * (n - 1.0) - within) * self.p_out;
        if expected < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "expected initial edge count {expected:.2} is below 1; raise p_in/p_out"
            )));
        }
        Ok(())
    }

    fn class_count(&self) -> usize {
        self.num_communities + 1 // one per community plus the between class
    }

    fn pair_class(&self, i: NodeId, j: NodeId) -> usize {
        let ci = community_of(i.index(), self.num_communities);
        if ci == community_of(j.index(), self.num_communities) {
            ci
        } else {
            self.num_communities
        }
    }

    fn class_weight(&self, class: usize) -> f64 {
        let k = self.num_communities;
        if class >= k {
            1.0 // between-community pairs
        } else if k == 1 {
            self.churn_asymmetry
        } else {
            1.0 + (self.churn_asymmetry - 1.0) * (k - 1 - class) as f64 / (k - 1) as f64
        }
    }
}

fn community_of(node: usize, num_communities: usize) -> usize {
    node % num_communities
}

fn within_pair_count(num_nodes: usize, num_communities: usize) -> usize {
    let mut count = 0;
    for i in 0..num_nodes {
        for j in 0..num_nodes {
            if i != j && community_of(i, num_communities) == community_of(j, num_communities) {
                count += 1;
            }
        }
    }
    count
}

/// Same community under the generator's node-to-community assignment.
pub fn same_community(cfg: &SynthConfig, i: NodeId, j: NodeId) -> bool {
    community_of(i.index(), cfg.num_communities) == community_of(j.index(), cfg.num_communities)
}

/// The churn weight of a pair: how strongly the generator prefers to form
/// and dissolve it. A perfect ranking by this value is the Bayes-optimal
/// scorer for both transition tasks.
pub fn churn_weight(cfg: &SynthConfig, i: NodeId, j: NodeId) -> f64 {
    cfg.class_weight(cfg.pair_class(i, j))
}

/// Generates a temporal network; deterministic given the seed.
///
/// Each transition dissolves `max(1, round(rewire_rate * |E|))` edges drawn
/// by class weight and forms the same number of new ones, refilled per
/// class, so every transition has at least one formed and one dissolved
/// edge and snapshots keep a constant edge count and class mix.
pub fn generate(cfg: &SynthConfig) -> Result<TemporalNetwork> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.num_nodes;

    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let e = (NodeId(i as u32), NodeId(j as u32));
            let p = if same_community(cfg, e.0, e.1) { cfg.p_in } else { cfg.p_out };
            if rng.gen::<f64>() < p {
                edges.insert(e);
            }
        }
    }
    if edges.is_empty() {
        // the expected count passed validation but the draw came up empty
        edges.insert((NodeId(0), NodeId(1)));
    }

    let mut sets = Vec::with_capacity(cfg.snapshots);
    sets.push(edges.clone());
    for _ in 1..cfg.snapshots {
        let churn = ((cfg.rewire_rate * edges.len() as f64).round() as usize)
            .clamp(1, edges.len().saturating_sub(1).max(1));

        let mut edge_pools = class_pools(cfg, edges.iter().copied());
        let dissolved = weighted_class_draw(cfg, &mut rng, &mut edge_pools, churn);

        let mut gap_pools = class_pools(
            cfg,
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter_map(|(i, j)| {
                if i == j {
                    return None;
                }
                let e = (NodeId(i as u32), NodeId(j as u32));
                (!edges.contains(&e)).then_some(e)
            }),
        );
        // refill each class with what it lost; spill over if a pool runs dry
        let mut quotas = vec![0usize; cfg.class_count()];
        for e in &dissolved {
            quotas[cfg.pair_class(e.0, e.1)] += 1;
        }
        let mut formed = Vec::with_capacity(dissolved.len());
        let mut shortfall = 0usize;
        for (class, &quota) in quotas.iter().enumerate() {
            let pool = &mut gap_pools[class];
            let take = quota.min(pool.len());
            shortfall += quota - take;
            for _ in 0..take {
                let idx = rng.gen_range(0..pool.len());
                formed.push(pool.swap_remove(idx));
            }
        }
        if shortfall > 0 {
            formed.extend(weighted_class_draw(cfg, &mut rng, &mut gap_pools, shortfall));
        }

        for e in &dissolved {
            edges.remove(e);
        }
        for e in &formed {
            edges.insert(*e);
        }
        if formed.is_empty() {
            // fully connected graph: drop one edge so the transition stays
            // non-degenerate
            if let Some(&e) = edges.iter().next() {
                edges.remove(&e);
            }
        }
        sets.push(edges.clone());
    }

    Ok(TemporalNetwork::from_snapshots(n, sets))
}

fn class_pools<I: IntoIterator<Item = Edge>>(cfg: &SynthConfig, items: I) -> Vec<Vec<Edge>> {
    let mut pools = vec![Vec::new(); cfg.class_count()];
    for e in items {
        pools[cfg.pair_class(e.0, e.1)].push(e);
    }
    pools
}

/// Draws `count` items without replacement; each item's weight is its
/// class weight.
fn weighted_class_draw(
    cfg: &SynthConfig,
    rng: &mut ChaCha8Rng,
    pools: &mut [Vec<Edge>],
    count: usize,
) -> Vec<Edge> {
    let weights: Vec<f64> = (0..pools.len()).map(|c| cfg.class_weight(c)).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let total: f64 = pools
            .iter()
            .zip(&weights)
            .map(|(p, w)| w * p.len() as f64)
            .sum();
        if total <= 0.0 {
            break;
        }
        let mut ticket = rng.gen::<f64>() * total;
        let mut chosen = None;
        for (class, pool) in pools.iter().enumerate() {
            let mass = weights[class] * pool.len() as f64;
            if ticket < mass {
                chosen = Some(class);
                break;
            }
            ticket -= mass;
        }
        // float round-off can leave the ticket past the last non-empty pool
        let class = chosen
            .or_else(|| pools.iter().rposition(|p| !p.is_empty()))
            .expect("total mass positive implies a non-empty pool");
        let pool = &mut pools[class];
        let idx = rng.gen_range(0..pool.len());
        out.push(pool.swap_remove(idx));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let cfg = SynthConfig { num_nodes: 40, seed: 3, ..SynthConfig::default() };
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        let other = SynthConfig { seed: 4, ..cfg };
        assert_ne!(generate(&cfg).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn every_transition_is_nondegenerate() {
        let cfg = SynthConfig { num_nodes: 50, snapshots: 6, seed: 11, ..SynthConfig::default() };
        let net = generate(&cfg).unwrap();
        for t in 1..net.len() {
            let tr = net.derive_transition(t).unwrap();
            assert!(!tr.formed.is_empty(), "no formation at t = {t}");
            assert!(!tr.dissolved.is_empty(), "no dissolution at t = {t}");
        }
    }

    #[test]
    fn tiny_rewire_rate_clamps_to_minimum_churn() {
        let cfg = SynthConfig {
            num_nodes: 30,
            rewire_rate: 1e-9,
            snapshots: 4,
            seed: 7,
            ..SynthConfig::default()
        };
        let net = generate(&cfg).unwrap();
        for t in 1..net.len() {
            let tr = net.derive_transition(t).unwrap();
            assert!(!tr.formed.is_empty() && !tr.dissolved.is_empty());
            assert!(tr.formed.len() <= 2 && tr.dissolved.len() <= 2);
        }
    }

    #[test]
    fn node_set_and_edge_count_stay_constant() {
        let cfg = SynthConfig { num_nodes: 60, seed: 19, ..SynthConfig::default() };
        let net = generate(&cfg).unwrap();
        assert_eq!(net.node_count(), 60);
        let first = net.snapshot(0).unwrap().edge_count();
        for snap in net.snapshots() {
            assert_eq!(snap.edge_count(), first);
        }
    }

    #[test]
    fn class_mix_stays_stationary() {
        let cfg = SynthConfig { num_nodes: 80, seed: 29, ..SynthConfig::default() };
        let net = generate(&cfg).unwrap();
        let class_counts = |snap: &crate::graph::Snapshot| {
            let mut counts = vec![0usize; cfg.class_count()];
            for (i, j) in snap.edges() {
                counts[cfg.pair_class(i, j)] += 1;
            }
            counts
        };
        let first = class_counts(net.snapshot(0).unwrap());
        let last = class_counts(net.snapshot(net.len() - 1).unwrap());
        // quota refill keeps each class within spill-over slack of its start
        for (class, (&a, &b)) in first.iter().zip(&last).enumerate() {
            let drift = (a as i64 - b as i64).abs();
            assert!(drift <= 3, "class {class} drifted {a} -> {b}");
        }
    }

    #[test]
    fn empty_expected_graph_is_a_config_error() {
        let cfg = SynthConfig {
            num_nodes: 5,
            p_in: 0.0,
            p_out: 0.0,
            ..SynthConfig::default()
        };
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn churn_weight_grades_by_community_and_tops_out_at_config_value() {
        let cfg = SynthConfig::default();
        let w0 = churn_weight(&cfg, NodeId(0), NodeId(4)); // community 0
        let w3 = churn_weight(&cfg, NodeId(3), NodeId(7)); // community 3
        let wb = churn_weight(&cfg, NodeId(0), NodeId(1)); // between
        assert_eq!(w0, cfg.churn_asymmetry);
        assert_eq!(w3, 1.0);
        assert_eq!(wb, 1.0);
        let w1 = churn_weight(&cfg, NodeId(1), NodeId(5));
        let w2 = churn_weight(&cfg, NodeId(2), NodeId(6));
        assert!(w0 > w1 && w1 > w2 && w2 > w3);
    }

    #[test]
    fn uniform_churn_formation_tracks_candidate_pool_share() {
        // with churn_asymmetry = 1 every class quota is a uniform draw, so
        // the within-community fraction of formed edges matches the pool
        // share within Monte Carlo error
        let mut formed_within = 0usize;
        let mut formed_total = 0usize;
        let mut expected_within = 0.0f64;
        for seed in 0..20 {
            let cfg = SynthConfig {
                num_nodes: 60,
                churn_asymmetry: 1.0,
                snapshots: 5,
                seed,
                ..SynthConfig::default()
            };
            let net = generate(&cfg).unwrap();
            for t in 1..net.len() {
                let prev = net.snapshot(t - 1).unwrap();
                let tr = net.derive_transition(t).unwrap();
                let mut pool_within = 0usize;
                let mut pool_total = 0usize;
                for i in 0..60u32 {
                    for j in 0..60u32 {
                        if i == j || prev.has_edge(NodeId(i), NodeId(j)) {
                            continue;
                        }
                        pool_total += 1;
                        if same_community(&cfg, NodeId(i), NodeId(j)) {
                            pool_within += 1;
                        }
                    }
                }
                let share = pool_within as f64 / pool_total as f64;
                for &(i, j) in &tr.formed {
                    formed_total += 1;
                    expected_within += share;
                    if same_community(&cfg, i, j) {
                        formed_within += 1;
                    }
                }
            }
        }
        // each formed edge is a Bernoulli(share) indicator (slightly
        // negatively correlated within a step, so the binomial sigma bounds
        // the true spread)
        let p = expected_within / formed_total as f64;
        let sigma = (formed_total as f64 * p * (1.0 - p)).sqrt();
        let diff = (formed_within as f64 - expected_within).abs();
        assert!(
            diff < 3.0 * sigma,
            "within-count {formed_within} vs expected {expected_within:.1} (3 sigma = {:.1})",
            3.0 * sigma
        );
    }

    #[test]
    fn biased_churn_concentrates_in_active_communities() {
        let uniform = SynthConfig {
            num_nodes: 60,
            churn_asymmetry: 1.0,
            seed: 23,
            ..SynthConfig::default()
        };
        let biased = SynthConfig { churn_asymmetry: 8.0, ..uniform.clone() };
        let busiest_fraction = |cfg: &SynthConfig| {
            let net = generate(cfg).unwrap();
            let mut busy = 0usize;
            let mut total = 0usize;
            for t in 1..net.len() {
                let tr = net.derive_transition(t).unwrap();
                for &(i, j) in tr.formed.iter().chain(tr.dissolved.iter()) {
                    total += 1;
                    if cfg.pair_class(i, j) == 0 {
                        busy += 1;
                    }
                }
            }
            busy as f64 / total as f64
        };
        assert!(busiest_fraction(&biased) > busiest_fraction(&uniform) + 0.15);
    }
}
