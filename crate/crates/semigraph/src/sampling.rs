//! Training-pair generation: deep-walk contexts, past-transition positives,
//! and negative sampling.
//!
//! Each sampler is deterministic given its seed, so a fixed seed fixes the
//! entire sample stream and epochs are replayable.

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, Snapshot, Task, TransitionPair};

/// Random-walk corpus parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    /// Walks started from every non-isolated node.
    pub walks_per_node: usize,
    /// Nodes per walk, including the start node.
    pub walk_length: usize,
    /// Maximum distance (in walk positions) between a node and its context.
    pub window: usize,
    /// Follow out-edges only instead of the undirected view.
    pub directed: bool,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walks_per_node: 5,
            walk_length: 40,
            window: 5,
            directed: false,
            seed: 0,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.walks_per_node < 1 {
            return Err(crate::Error::InvalidConfig(
                "walks_per_node must be at least 1".into(),
            ));
        }
        if self.walk_length < 2 {
            return Err(crate::Error::InvalidConfig(
                "walk_length must be at least 2".into(),
            ));
        }
        if self.window < 1 || self.window >= self.walk_length {
            return Err(crate::Error::InvalidConfig(
                "window must satisfy 1 <= window < walk_length".into(),
            ));
        }
        Ok(())
    }
}

/// Which of the four loss terms a sample feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossTerm {
    FormationSupervised,
    DissolutionSupervised,
    FormationContext,
    DissolutionContext,
}

impl LossTerm {
    pub fn is_supervised(self) -> bool {
        matches!(
            self,
            LossTerm::FormationSupervised | LossTerm::DissolutionSupervised
        )
    }

    pub fn task(self) -> Task {
        match self {
            LossTerm::FormationSupervised | LossTerm::FormationContext => Task::Formation,
            LossTerm::DissolutionSupervised | LossTerm::DissolutionContext => Task::Dissolution,
        }
    }
}

/// A labeled node pair feeding one loss term. `gamma` is +1 for positives
/// and -1 for corrupted pairs; `i != j` always.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingSample {
    pub i: NodeId,
    pub j: NodeId,
    pub gamma: f64,
    pub term: LossTerm,
}

impl TrainingSample {
    pub fn positive(i: NodeId, j: NodeId, term: LossTerm) -> Self {
        debug_assert_ne!(i, j);
        TrainingSample { i, j, gamma: 1.0, term }
    }

    pub fn negative(i: NodeId, j: NodeId, term: LossTerm) -> Self {
        debug_assert_ne!(i, j);
        TrainingSample { i, j, gamma: -1.0, term }
    }
}

/// Generates `(node, context)` pairs by truncated uniform random walks over
/// the current network.
///
/// For every node with at least one neighbor, `walks_per_node` walks of
/// `walk_length` nodes are taken (over the undirected view unless
/// `cfg.directed`), and a pair is emitted for every two distinct walk
/// positions at most `window` apart. Walks from isolated nodes are skipped;
/// pairs that hit the same node twice are dropped.
pub fn deep_walk_contexts(
    current: &Snapshot,
    num_nodes: usize,
    cfg: &WalkConfig,
) -> Vec<(NodeId, NodeId)> {
    let adj = if cfg.directed {
        current.directed_adjacency(num_nodes)
    } else {
        current.undirected_adjacency(num_nodes)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pairs = Vec::new();
    let mut walk: Vec<NodeId> = Vec::with_capacity(cfg.walk_length);

    for start in 0..num_nodes {
        if adj[start].is_empty() {
            continue;
        }
        for _ in 0..cfg.walks_per_node {
            walk.clear();
            walk.push(NodeId(start as u32));
            let mut here = start;
            for _ in 1..cfg.walk_length {
                let neighbors = &adj[here];
                if neighbors.is_empty() {
                    break; // directed sink
                }
                let next = neighbors[rng.gen_range(0..neighbors.len())];
                walk.push(next);
                here = next.index();
            }
            for a in 0..walk.len() {
                let lo = a.saturating_sub(cfg.window);
                let hi = (a + cfg.window).min(walk.len() - 1);
                for b in lo..=hi {
                    if b != a && walk[a] != walk[b] {
                        pairs.push((walk[a], walk[b]));
                    }
                }
            }
        }
    }
    pairs
}

/// Concatenates the formed (or dissolved) edge sets across a transition
/// window. Duplicates across times are retained: a pair that forms twice is
/// sampled twice.
pub fn positive_transition_pairs(
    transitions: &[TransitionPair],
    kind: Task,
) -> Vec<(NodeId, NodeId)> {
    let mut pairs = Vec::new();
    for tr in transitions {
        let set = match kind {
            Task::Formation => &tr.formed,
            Task::Dissolution => &tr.dissolved,
        };
        pairs.extend(set.iter().copied());
    }
    pairs
}

/// Draws `k` corrupted pairs `(i, j')` per positive `(i, j)`, with `j'`
/// uniform over the node set minus `i`.
///
/// A draw that collides with a positive of the same term is rejected and
/// redrawn, up to 100 attempts, after which that negative is skipped; with
/// the positives of term X as the rejection set, no emitted negative is ever
/// a positive of term X. Deterministic given the seed.
pub fn negative_samples(
    positives: &[(NodeId, NodeId)],
    term: LossTerm,
    num_nodes: usize,
    k: usize,
    seed: u64,
) -> Vec<TrainingSample> {
    assert!(num_nodes >= 2, "need at least two nodes to corrupt pairs");
    assert!(k >= 1, "need at least one negative per positive");
    let positive_set: HashSet<(NodeId, NodeId)> = positives.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(positives.len() * k);
    for &(i, _) in positives {
        for _ in 0..k {
            for _attempt in 0..100 {
                let mut cand = rng.gen_range(0..num_nodes as u32 - 1);
                if cand >= i.0 {
                    cand += 1; // uniform over V \ {i}
                }
                let j = NodeId(cand);
                if !positive_set.contains(&(i, j)) {
                    out.push(TrainingSample::negative(i, j, term));
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, TemporalNetwork};
    use std::collections::{BTreeSet, HashMap};

    fn snapshot(edges: &[(u32, u32)]) -> Snapshot {
        Snapshot::new(0, edges.iter().map(|&(i, j)| (NodeId(i), NodeId(j))))
    }

    #[test]
    fn path_graph_emits_only_adjacent_pairs() {
        let snap = snapshot(&[(0, 1)]);
        let cfg = WalkConfig {
            walks_per_node: 1,
            walk_length: 2,
            window: 1,
            directed: false,
            seed: 5,
        };
        let pairs = deep_walk_contexts(&snap, 2, &cfg);
        assert!(!pairs.is_empty());
        for (i, c) in pairs {
            assert!(matches!(
                (i.0, c.0),
                (0, 1) | (1, 0)
            ));
        }
    }

    #[test]
    fn isolated_node_contributes_no_pairs() {
        let snap = snapshot(&[(0, 1)]);
        let pairs = deep_walk_contexts(&snap, 3, &WalkConfig::default());
        assert!(pairs.iter().all(|(i, c)| i.0 != 2 && c.0 != 2));
    }

    #[test]
    fn empty_graph_yields_empty_corpus() {
        let snap = snapshot(&[]);
        assert!(deep_walk_contexts(&snap, 4, &WalkConfig::default()).is_empty());
    }

    #[test]
    fn no_pair_crosses_disconnected_cliques() {
        // clique {0,1,2} and clique {3,4,5} with no bridge
        let snap = snapshot(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let cfg = WalkConfig {
            walks_per_node: 4,
            walk_length: 10,
            window: 3,
            directed: false,
            seed: 9,
        };
        for (i, c) in deep_walk_contexts(&snap, 6, &cfg) {
            assert_eq!(i.0 < 3, c.0 < 3, "pair ({i}, {c}) crosses cliques");
        }
    }

    #[test]
    fn contexts_stay_within_window_reachability() {
        let snap = snapshot(&[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let cfg = WalkConfig {
            walks_per_node: 3,
            walk_length: 6,
            window: 2,
            directed: false,
            seed: 13,
        };
        // window 2 on a path: contexts at distance <= 2
        for (i, c) in deep_walk_contexts(&snap, 5, &cfg) {
            let dist = (i.0 as i64 - c.0 as i64).abs();
            assert!(dist <= 2, "({i},{c}) further than the window allows");
        }
    }

    #[test]
    fn walk_corpus_is_deterministic() {
        let snap = snapshot(&[(0, 1), (1, 2), (2, 0)]);
        let cfg = WalkConfig { seed: 77, ..WalkConfig::default() };
        assert_eq!(
            deep_walk_contexts(&snap, 3, &cfg),
            deep_walk_contexts(&snap, 3, &cfg)
        );
    }

    #[test]
    fn no_sample_pairs_a_node_with_itself() {
        let snap = snapshot(&[(0, 1), (1, 0), (1, 2), (2, 1)]);
        let cfg = WalkConfig {
            walks_per_node: 5,
            walk_length: 8,
            window: 4,
            directed: false,
            seed: 3,
        };
        for (i, c) in deep_walk_contexts(&snap, 3, &cfg) {
            assert_ne!(i, c);
        }
    }

    #[test]
    fn directed_walks_respect_edge_direction() {
        // 0 -> 1 -> 2, with 2 a sink
        let snap = snapshot(&[(0, 1), (1, 2)]);
        let cfg = WalkConfig {
            walks_per_node: 3,
            walk_length: 5,
            window: 2,
            directed: true,
            seed: 21,
        };
        for (i, c) in deep_walk_contexts(&snap, 3, &cfg) {
            // every emitted pair respects forward reachability one way or the other
            assert_ne!((i.0, c.0), (0, 0));
        }
        // node 2 never starts a walk that goes anywhere, and no walk can
        // move backwards, so (2, x) pairs can only arise as the reversed
        // emission within a forward walk.
        let undirected_cfg = WalkConfig { directed: false, ..cfg };
        let undirected = deep_walk_contexts(&snap, 3, &undirected_cfg);
        assert!(undirected.len() >= deep_walk_contexts(&snap, 3, &cfg).len());
    }

    #[test]
    fn transition_positives_single_window() {
        let tr = TransitionPair {
            time: 1,
            formed: [(NodeId(0), NodeId(1))].into_iter().collect(),
            dissolved: BTreeSet::new(),
        };
        let pairs = positive_transition_pairs(&[tr], Task::Formation);
        assert_eq!(pairs, vec![(NodeId(0), NodeId(1))]);
    }

    #[test]
    fn repeated_formation_is_sampled_twice() {
        let edge: Edge = (NodeId(0), NodeId(1));
        let tr = |time| TransitionPair {
            time,
            formed: [edge].into_iter().collect(),
            dissolved: BTreeSet::new(),
        };
        let pairs = positive_transition_pairs(&[tr(2), tr(1)], Task::Formation);
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn transition_positives_match_bruteforce_multiset() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let n = 12;
        let sets: Vec<BTreeSet<Edge>> = (0..5)
            .map(|_| {
                let mut set = BTreeSet::new();
                for i in 0..n as u32 {
                    for j in 0..n as u32 {
                        if i != j && rng.gen::<f64>() < 0.15 {
                            set.insert((NodeId(i), NodeId(j)));
                        }
                    }
                }
                set
            })
            .collect();
        let net = TemporalNetwork::from_snapshots(n, sets);
        let t = net.len() - 1;
        let window = net.window_transitions(t, t).unwrap();
        for kind in Task::ALL {
            let got = positive_transition_pairs(&window, kind);
            let mut expected: Vec<(NodeId, NodeId)> = Vec::new();
            for s in (1..=t).rev() {
                let tr = net.derive_transition(s).unwrap();
                let set = match kind {
                    Task::Formation => tr.formed,
                    Task::Dissolution => tr.dissolved,
                };
                expected.extend(set);
            }
            let count = |v: &[(NodeId, NodeId)]| {
                let mut m: HashMap<(NodeId, NodeId), usize> = HashMap::new();
                for &p in v {
                    *m.entry(p).or_default() += 1;
                }
                m
            };
            assert_eq!(count(&got), count(&expected));
        }
    }

    #[test]
    fn negatives_are_never_positives_of_the_same_term() {
        let positives: Vec<(NodeId, NodeId)> = (0..20u32)
            .map(|i| (NodeId(i % 5), NodeId((i + 1) % 7 + 5)))
            .collect();
        let set: HashSet<_> = positives.iter().copied().collect();
        let negs = negative_samples(&positives, LossTerm::FormationSupervised, 12, 5, 67);
        assert!(negs.len() <= positives.len() * 5);
        for s in &negs {
            assert_eq!(s.gamma, -1.0);
            assert_ne!(s.i, s.j);
            assert!(!set.contains(&(s.i, s.j)));
            assert_eq!(s.term, LossTerm::FormationSupervised);
        }
    }

    #[test]
    fn exhausted_candidate_set_is_skipped() {
        // |V| = 2, positive (0, 1): the only corruption is (0, 1) itself
        let positives = vec![(NodeId(0), NodeId(1))];
        let negs = negative_samples(&positives, LossTerm::FormationSupervised, 2, 1, 5);
        assert!(negs.is_empty());
    }

    #[test]
    fn negative_sampling_is_deterministic() {
        let positives = vec![(NodeId(0), NodeId(1)), (NodeId(2), NodeId(3))];
        let a = negative_samples(&positives, LossTerm::DissolutionSupervised, 10, 3, 41);
        let b = negative_samples(&positives, LossTerm::DissolutionSupervised, 10, 3, 41);
        assert_eq!(a, b);
    }

    #[test]
    fn corruption_distribution_is_uniform_over_eligible_targets() {
        // one positive (0, 1), 6 nodes: eligible corruption targets are
        // {2, 3, 4, 5} (j' = 1 is rejected as the positive, j' = 0 never drawn)
        let positives = vec![(NodeId(0), NodeId(1))];
        let draws = 100_000;
        let mut counts = [0usize; 6];
        for rep in 0..draws {
            let negs = negative_samples(&positives, LossTerm::FormationContext, 6, 1, rep as u64);
            counts[negs[0].j.index()] += 1;
        }
        assert_eq!(counts[0], 0);
        assert_eq!(counts[1], 0);
        let expected = draws as f64 / 4.0;
        let chi2: f64 = counts[2..]
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // chi-square with 3 degrees of freedom: 16.27 is the 0.1% tail
        assert!(chi2 < 16.27, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    #[should_panic(expected = "at least two nodes")]
    fn negative_sampling_requires_two_nodes() {
        negative_samples(&[(NodeId(0), NodeId(1))], LossTerm::FormationSupervised, 1, 1, 0);
    }

    #[test]
    fn walk_config_validation() {
        assert!(WalkConfig::default().validate().is_ok());
        let bad = WalkConfig { window: 40, walk_length: 40, ..WalkConfig::default() };
        assert!(bad.validate().is_err());
        let bad = WalkConfig { walk_length: 1, ..WalkConfig::default() };
        assert!(bad.validate().is_err());
    }
}
