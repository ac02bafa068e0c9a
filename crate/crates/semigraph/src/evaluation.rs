//! Transition-prediction tasks and rank-based AUC.
//!
//! A task at origin `t` labels the candidate pairs of `G_t` with ground
//! truth from the transition into `t+1`. AUC is the Mann-Whitney rank
//! statistic with average ranks for ties: the probability that a random
//! positive outscores a random negative, counting ties as one half.

use crate::error::{Error, Result};
use crate::graph::{NodeId, Task, TemporalNetwork};
use crate::prediction::candidate_pairs;

/// Labeled candidate pairs for one (origin, task) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTask {
    pub origin: usize,
    pub task: Task,
    /// `(i, j, label)`: label is true iff the pair appears in the target
    /// transition set at `t+1`.
    pub candidates: Vec<(NodeId, NodeId, bool)>,
}

/// AUC together with the class counts it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AucResult {
    pub auc: f64,
    pub positives: usize,
    pub negatives: usize,
}

/// Anything that can score a candidate pair. Implemented for closures.
pub trait PairScorer {
    fn pair_score(&self, i: NodeId, j: NodeId) -> f64;
}

impl<F: Fn(NodeId, NodeId) -> f64> PairScorer for F {
    fn pair_score(&self, i: NodeId, j: NodeId) -> f64 {
        self(i, j)
    }
}

/// Builds the labeled task at origin `t`: candidates from `G_t`, labels from
/// the transition `G_t -> G_{t+1}`.
///
/// Errors if `t+1` is missing or if either class is empty (AUC undefined).
pub fn build_task(net: &TemporalNetwork, t: usize, task: Task) -> Result<EvalTask> {
    let transition = net.derive_transition(t + 1)?;
    let target = match task {
        Task::Formation => &transition.formed,
        Task::Dissolution => &transition.dissolved,
    };
    let candidates: Vec<(NodeId, NodeId, bool)> = candidate_pairs(net, t, task)?
        .into_iter()
        .map(|(i, j)| (i, j, target.contains(&(i, j))))
        .collect();
    let positives = candidates.iter().filter(|c| c.2).count();
    let negatives = candidates.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::DegenerateTask {
            task,
            origin: t,
            positives,
            negatives,
        });
    }
    Ok(EvalTask {
        origin: t,
        task,
        candidates,
    })
}

/// Rank-based AUC with average ranks for ties:
/// `(rank-sum of positives - P(P+1)/2) / (P * N)`.
pub fn auc(scored: &[(f64, bool)]) -> Result<AucResult> {
    let positives = scored.iter().filter(|(_, label)| *label).count();
    let negatives = scored.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::AucUndefined { positives, negatives });
    }

    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| scored[a].0.total_cmp(&scored[b].0));

    let mut positive_rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end < order.len() && scored[order[end]].0 == scored[order[start]].0 {
            end += 1;
        }
        // 1-based average rank of the tie group [start, end)
        let avg_rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            if scored[idx].1 {
                positive_rank_sum += avg_rank;
            }
        }
        start = end;
    }

    let p = positives as f64;
    let auc = (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * negatives as f64);
    Ok(AucResult {
        auc,
        positives,
        negatives,
    })
}

/// Scores every candidate of the task at origin `t` with the given scorer
/// and computes AUC against the `t+1` ground truth.
pub fn evaluate<S: PairScorer>(
    scorer: &S,
    net: &TemporalNetwork,
    t: usize,
    task: Task,
) -> Result<AucResult> {
    let eval_task = build_task(net, t, task)?;
    let scored: Vec<(f64, bool)> = eval_task
        .candidates
        .iter()
        .map(|&(i, j, label)| (scorer.pair_score(i, j), label))
        .collect();
    auc(&scored)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    /// O(P*N) pairwise comparison oracle, ties as one half.
    fn auc_pairwise(scored: &[(f64, bool)]) -> f64 {
        let pos: Vec<f64> = scored.iter().filter(|(_, l)| *l).map(|(s, _)| *s).collect();
        let neg: Vec<f64> = scored.iter().filter(|(_, l)| !*l).map(|(s, _)| *s).collect();
        let mut wins = 0.0;
        for &p in &pos {
            for &n in &neg {
                if p > n {
                    wins += 1.0;
                } else if p == n {
                    wins += 0.5;
                }
            }
        }
        wins / (pos.len() as f64 * neg.len() as f64)
    }

    #[test]
    fn perfect_separation_scores_one() {
        let scored = vec![(0.9, true), (0.8, true), (0.2, false), (0.1, false)];
        assert_eq!(auc(&scored).unwrap().auc, 1.0);
    }

    #[test]
    fn all_equal_scores_give_one_half() {
        let scored = vec![(0.5, true), (0.5, false), (0.5, true), (0.5, false)];
        assert_eq!(auc(&scored).unwrap().auc, 0.5);
    }

    #[test]
    fn single_class_input_is_rejected() {
        let scored = vec![(0.5, true), (0.7, true)];
        assert!(matches!(auc(&scored), Err(Error::AucUndefined { .. })));
    }

    #[test]
    fn rank_auc_equals_pairwise_oracle_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        for _ in 0..200 {
            let n = rng.gen_range(2..=100);
            let mut scored: Vec<(f64, bool)> = (0..n)
                .map(|_| {
                    // quantized scores force plenty of ties
                    let s = (rng.gen_range(-5i32..=5) as f64) / 4.0;
                    (s, rng.gen::<bool>())
                })
                .collect();
            // guarantee both classes
            scored[0].1 = true;
            if n > 1 {
                scored[1].1 = false;
            }
            let got = auc(&scored).unwrap().auc;
            assert_eq!(got, auc_pairwise(&scored));
        }
    }

    #[test]
    fn reversal_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for _ in 0..200 {
            let n = rng.gen_range(2..=80);
            let mut scored: Vec<(f64, bool)> =
                (0..n).map(|_| (rng.gen_range(-2.0..2.0), rng.gen())).collect();
            scored[0].1 = true;
            if n > 1 {
                scored[1].1 = false;
            }
            let flipped: Vec<(f64, bool)> = scored.iter().map(|&(s, l)| (-s, l)).collect();
            let a = auc(&scored).unwrap().auc;
            let b = auc(&flipped).unwrap().auc;
            assert_eq!(a + b, 1.0, "a = {a}, b = {b}");
        }
    }

    #[test]
    fn auc_is_invariant_under_monotone_transforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let scored: Vec<(f64, bool)> = (0..60)
            .map(|k| (rng.gen_range(-3.0..3.0), k % 3 == 0))
            .collect();
        let transformed: Vec<(f64, bool)> = scored
            .iter()
            .map(|&(s, l)| (s.exp() + 7.0, l))
            .collect();
        assert_eq!(auc(&scored).unwrap().auc, auc(&transformed).unwrap().auc);
    }

    #[test]
    fn auc_ignores_class_balance() {
        let scored = vec![(0.9, true), (0.4, false), (0.6, false), (0.2, false)];
        let mut duplicated = scored.clone();
        duplicated.extend(scored.iter().filter(|(_, l)| !*l).copied());
        assert_eq!(auc(&scored).unwrap().auc, auc(&duplicated).unwrap().auc);
    }

    fn simple_net() -> TemporalNetwork {
        // 3 nodes; G_0 empty, G_1 = {(a, b)}
        let g0: BTreeSet<Edge> = BTreeSet::new();
        let g1: BTreeSet<Edge> = [(NodeId(0), NodeId(1))].into_iter().collect();
        TemporalNetwork::from_snapshots(3, vec![g0, g1])
    }

    #[test]
    fn formation_task_on_three_nodes() {
        let net = simple_net();
        let task = build_task(&net, 0, Task::Formation).unwrap();
        assert_eq!(task.candidates.len(), 6);
        assert_eq!(task.candidates.iter().filter(|c| c.2).count(), 1);
        assert!(task
            .candidates
            .iter()
            .any(|&(i, j, label)| label && i == NodeId(0) && j == NodeId(1)));
    }

    #[test]
    fn unchanged_network_gives_degenerate_tasks() {
        let g: BTreeSet<Edge> = [(NodeId(0), NodeId(1))].into_iter().collect();
        let net = TemporalNetwork::from_snapshots(3, vec![g.clone(), g]);
        for task in Task::ALL {
            assert!(matches!(
                build_task(&net, 0, task),
                Err(Error::DegenerateTask { .. })
            ));
        }
    }

    #[test]
    fn missing_next_snapshot_is_an_index_error() {
        let net = simple_net();
        assert!(matches!(
            build_task(&net, 1, Task::Formation),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn labels_match_bruteforce_pair_comparison() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        let n = 15;
        let sets: Vec<BTreeSet<Edge>> = (0..2)
            .map(|_| {
                let mut set = BTreeSet::new();
                for i in 0..n as u32 {
                    for j in 0..n as u32 {
                        if i != j && rng.gen::<f64>() < 0.2 {
                            set.insert((NodeId(i), NodeId(j)));
                        }
                    }
                }
                set
            })
            .collect();
        let net = TemporalNetwork::from_snapshots(n, sets);
        let (g0, g1) = (net.snapshot(0).unwrap(), net.snapshot(1).unwrap());
        for task in Task::ALL {
            let built = match build_task(&net, 0, task) {
                Ok(t) => t,
                Err(Error::DegenerateTask { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            for &(i, j, label) in &built.candidates {
                let expected = match task {
                    Task::Formation => !g0.has_edge(i, j) && g1.has_edge(i, j),
                    Task::Dissolution => g0.has_edge(i, j) && !g1.has_edge(i, j),
                };
                assert_eq!(label, expected);
            }
        }
    }

    #[test]
    fn oracle_predictor_scores_auc_one() {
        let net = simple_net();
        let truth = net.derive_transition(1).unwrap();
        let scorer = move |i: NodeId, j: NodeId| {
            if truth.formed.contains(&(i, j)) {
                1.0
            } else {
                0.0
            }
        };
        let result = evaluate(&scorer, &net, 0, Task::Formation).unwrap();
        assert_eq!(result.auc, 1.0);
        assert_eq!(result.positives, 1);
        assert_eq!(result.negatives, 5);
    }

    #[test]
    fn constant_predictor_scores_one_half() {
        let net = simple_net();
        let scorer = |_: NodeId, _: NodeId| 0.42;
        assert_eq!(evaluate(&scorer, &net, 0, Task::Formation).unwrap().auc, 0.5);
    }

    #[test]
    fn predictor_and_negation_sum_to_one() {
        let cfg = crate::synth::SynthConfig {
            num_nodes: 30,
            snapshots: 3,
            seed: 15,
            ..crate::synth::SynthConfig::default()
        };
        let net = crate::synth::generate(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let table: Vec<f64> = (0..30 * 30).map(|_| rng.gen()).collect();
        let flipped = table.clone();
        let score = move |i: NodeId, j: NodeId| table[i.index() * 30 + j.index()];
        let neg_score = move |i: NodeId, j: NodeId| -flipped[i.index() * 30 + j.index()];
        for task in Task::ALL {
            let a = evaluate(&score, &net, 1, task).unwrap().auc;
            let b = evaluate(&neg_score, &net, 1, task).unwrap().auc;
            assert_eq!(a + b, 1.0);
        }
    }
}
