//! Heuristic link-prediction baselines: Adamic-Adar, preferential
//! attachment, their all-history variants, and last time of linkage.
//!
//! Neighborhoods and degrees are taken over the undirected view of the
//! graph; last time of linkage checks directed edge presence. For the
//! dissolution task each heuristic can rank by its complementary (negated)
//! score, the convention used when a formation heuristic is repurposed to
//! predict which links vanish.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{NodeId, Snapshot, Task, TemporalNetwork};
use crate::prediction::{candidate_pairs, sort_ranked, RankedPrediction};

/// The heuristic family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineKind {
    /// Adamic-Adar on the current snapshot.
    AdamicAdar,
    /// Preferential attachment on the current snapshot.
    PrefAttach,
    /// Adamic-Adar on the union of all snapshots up to the origin.
    AdamicAdarAll,
    /// Preferential attachment on the union of all snapshots up to the origin.
    PrefAttachAll,
    /// Most recent snapshot index at which the directed pair was linked.
    LastTime,
}

impl BaselineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BaselineKind::AdamicAdar => "AA",
            BaselineKind::PrefAttach => "PA",
            BaselineKind::AdamicAdarAll => "AA-all",
            BaselineKind::PrefAttachAll => "PA-all",
            BaselineKind::LastTime => "LastTime",
        }
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aa" => Ok(BaselineKind::AdamicAdar),
            "pa" => Ok(BaselineKind::PrefAttach),
            "aa-all" | "aaall" => Ok(BaselineKind::AdamicAdarAll),
            "pa-all" | "paall" => Ok(BaselineKind::PrefAttachAll),
            "lasttime" | "last-time" | "ll" => Ok(BaselineKind::LastTime),
            other => Err(Error::InvalidConfig(format!("unknown baseline `{other}`"))),
        }
    }
}

fn undirected_neighbor_sets(graph: &Snapshot, num_nodes: usize) -> Vec<Vec<NodeId>> {
    graph.undirected_adjacency(num_nodes)
}

fn aa_from_adjacency(adj: &[Vec<NodeId>], i: NodeId, j: NodeId) -> f64 {
    let (ni, nj) = (&adj[i.index()], &adj[j.index()]);
    // sorted-list intersection
    let mut score = 0.0;
    let (mut a, mut b) = (0usize, 0usize);
    while a < ni.len() && b < nj.len() {
        match ni[a].cmp(&nj[b]) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => b += 1,
            std::cmp::Ordering::Equal => {
                let deg = adj[ni[a].index()].len();
                if deg > 1 {
                    score += 1.0 / (deg as f64).ln();
                }
                a += 1;
                b += 1;
            }
        }
    }
    score
}

/// Adamic-Adar: `sum over common neighbors z of 1 / ln(deg(z))`, over the
/// undirected view. Common neighbors of degree <= 1 are skipped.
pub fn adamic_adar(graph: &Snapshot, num_nodes: usize, i: NodeId, j: NodeId) -> f64 {
    assert_ne!(i, j, "pair endpoints must differ");
    aa_from_adjacency(&undirected_neighbor_sets(graph, num_nodes), i, j)
}

/// Preferential attachment: product of the undirected degrees.
pub fn pref_attach(graph: &Snapshot, num_nodes: usize, i: NodeId, j: NodeId) -> f64 {
    assert_ne!(i, j, "pair endpoints must differ");
    let adj = undirected_neighbor_sets(graph, num_nodes);
    (adj[i.index()].len() * adj[j.index()].len()) as f64
}

/// Most recent `s <= t` with a directed edge `(i, j)` in `G_s`, or negative
/// infinity if the pair was never linked; more recent means a higher score.
pub fn last_time_score(net: &TemporalNetwork, t: usize, i: NodeId, j: NodeId) -> f64 {
    for s in (0..=t).rev() {
        if net.snapshots()[s].has_edge(i, j) {
            return s as f64;
        }
    }
    f64::NEG_INFINITY
}

/// Ranks every candidate pair of the task at origin `t` by the heuristic.
///
/// `complementary` (dissolution only) negates the raw score before ranking,
/// so the ranking is the exact reversal of the non-complementary one modulo
/// tie order.
pub fn baseline_rank(
    net: &TemporalNetwork,
    t: usize,
    task: Task,
    kind: BaselineKind,
    complementary: bool,
) -> Result<Vec<RankedPrediction>> {
    let candidates = candidate_pairs(net, t, task)?;
    let num_nodes = net.node_count();
    let graph = match kind {
        BaselineKind::AdamicAdar | BaselineKind::PrefAttach => net.snapshot(t)?.clone(),
        BaselineKind::AdamicAdarAll | BaselineKind::PrefAttachAll => net.union_graph(t)?,
        BaselineKind::LastTime => net.snapshot(t)?.clone(),
    };
    let adj = undirected_neighbor_sets(&graph, num_nodes);
    let negate = complementary && task == Task::Dissolution;

    let mut ranked: Vec<RankedPrediction> = candidates
        .into_iter()
        .map(|(i, j)| {
            let raw = match kind {
                BaselineKind::AdamicAdar | BaselineKind::AdamicAdarAll => {
                    aa_from_adjacency(&adj, i, j)
                }
                BaselineKind::PrefAttach | BaselineKind::PrefAttachAll => {
                    (adj[i.index()].len() * adj[j.index()].len()) as f64
                }
                BaselineKind::LastTime => last_time_score(net, t, i, j),
            };
            RankedPrediction {
                i,
                j,
                score: if negate { -raw } else { raw },
                task,
                label: None,
            }
        })
        .collect();
    sort_ranked(&mut ranked);
    Ok(ranked)
}
