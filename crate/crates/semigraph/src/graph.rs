//! Temporal network data model.
//!
//! A dynamic network is an ordered sequence of directed snapshots over a
//! fixed union node set. The transition between consecutive snapshots
//! splits into a formation set (edges that appeared) and a dissolution set
//! (edges that vanished); those two sets are the prediction targets
//! everything else in this crate is built around.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Dense node index into the union node set.
///
/// External labels are mapped to dense ids at ingestion; the mapping is a
/// bijection fixed by sorting the union of labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A directed edge between two nodes.
pub type Edge = (NodeId, NodeId);

/// Which side of a transition an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Task {
    Formation,
    Dissolution,
}

impl Task {
    pub const ALL: [Task; 2] = [Task::Formation, Task::Dissolution];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Formation => "formation",
            Task::Dissolution => "dissolution",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "formation" | "form" | "f" => Ok(Task::Formation),
            "dissolution" | "diss" | "d" => Ok(Task::Dissolution),
            other => Err(Error::InvalidConfig(format!(
                "unknown task `{other}` (expected formation or dissolution)"
            ))),
        }
    }
}

/// One directed snapshot of the network.
///
/// Edge sets are duplicate-free, self-loop-free, and directed: `(i, j)` and
/// `(j, i)` are distinct entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    /// Snapshot index within the owning [`TemporalNetwork`].
    pub time: usize,
    edges: BTreeSet<Edge>,
}

impl Snapshot {
    /// Builds a snapshot from an edge iterator, dropping self-loops and
    /// collapsing duplicates.
    pub fn new<I: IntoIterator<Item = Edge>>(time: usize, edges: I) -> Self {
        let edges = edges.into_iter().filter(|(i, j)| i != j).collect();
        Snapshot { time, edges }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    #[inline]
    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.edges.contains(&(i, j))
    }

    /// Edges in ascending `(source, target)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// Adjacency lists over the undirected view: `j` is a neighbor of `i`
    /// whenever either `(i, j)` or `(j, i)` is present. Lists are sorted and
    /// duplicate-free.
    pub fn undirected_adjacency(&self, num_nodes: usize) -> Vec<Vec<NodeId>> {
        let mut sets: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); num_nodes];
        for &(i, j) in &self.edges {
            sets[i.index()].insert(j);
            sets[j.index()].insert(i);
        }
        sets.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Adjacency lists following out-edges only.
    pub fn directed_adjacency(&self, num_nodes: usize) -> Vec<Vec<NodeId>> {
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); num_nodes];
        for &(i, j) in &self.edges {
            adj[i.index()].push(j);
        }
        adj
    }
}

/// The edge-set changes between two consecutive snapshots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionPair {
    /// Index `t` of the newer snapshot; the pair describes `G_{t-1} -> G_t`.
    pub time: usize,
    /// Edges present at `t` but absent at `t-1`.
    pub formed: BTreeSet<Edge>,
    /// Edges present at `t-1` but absent at `t`.
    pub dissolved: BTreeSet<Edge>,
}

/// An ordered sequence of snapshots over a fixed union node set.
///
/// Immutable after construction; snapshot indices are dense `0..len`, and the
/// original time labels are kept only for serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalNetwork {
    snapshots: Vec<Snapshot>,
    node_labels: Vec<String>,
    time_labels: Vec<i64>,
}

impl TemporalNetwork {
    /// Assembles a network from parsed `(source, target, time)` rows.
    ///
    /// Node labels are mapped to dense ids by sorting the union of labels;
    /// time labels are mapped to consecutive snapshot indices by numeric sort
    /// order. Self-loops are dropped and duplicate edges collapsed. Returns
    /// [`Error::EmptyInput`] if nothing remains.
    pub fn from_rows(rows: &[(String, String, i64)]) -> Result<Self> {
        let mut labels: BTreeSet<&str> = BTreeSet::new();
        let mut times: BTreeSet<i64> = BTreeSet::new();
        for (src, dst, time) in rows {
            if src == dst {
                continue; // self-loop
            }
            labels.insert(src);
            labels.insert(dst);
            times.insert(*time);
        }
        if labels.is_empty() {
            return Err(Error::EmptyInput);
        }

        let node_labels: Vec<String> = labels.into_iter().map(String::from).collect();
        let time_labels: Vec<i64> = times.into_iter().collect();
        let id_of = |label: &str| -> NodeId {
            let pos = node_labels
                .binary_search_by(|probe| probe.as_str().cmp(label))
                .expect("label seen during scan");
            NodeId(pos as u32)
        };

        let mut edge_sets: Vec<BTreeSet<Edge>> = vec![BTreeSet::new(); time_labels.len()];
        for (src, dst, time) in rows {
            if src == dst {
                continue;
            }
            let t = time_labels.binary_search(time).expect("time seen during scan");
            edge_sets[t].insert((id_of(src), id_of(dst)));
        }

        let snapshots = edge_sets
            .into_iter()
            .enumerate()
            .map(|(t, edges)| Snapshot { time: t, edges })
            .collect();
        Ok(TemporalNetwork {
            snapshots,
            node_labels,
            time_labels,
        })
    }

    /// Builds a network directly from per-snapshot edge sets over `0..num_nodes`.
    ///
    /// Node labels are synthesized as zero-padded decimal strings so that the
    /// label sort order matches the numeric order and serialization
    /// round-trips to an identical network.
    pub fn from_snapshots(num_nodes: usize, edge_sets: Vec<BTreeSet<Edge>>) -> Self {
        let width = if num_nodes <= 1 {
            1
        } else {
            (num_nodes - 1).to_string().len()
        };
        let node_labels = (0..num_nodes).map(|i| format!("{i:0width$}")).collect();
        let time_labels = (0..edge_sets.len() as i64).collect();
        let snapshots = edge_sets
            .into_iter()
            .enumerate()
            .map(|(t, edges)| Snapshot { time: t, edges })
            .collect();
        TemporalNetwork {
            snapshots,
            node_labels,
            time_labels,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_labels.len()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    pub fn node_label(&self, id: NodeId) -> &str {
        &self.node_labels[id.index()]
    }

    pub fn time_labels(&self) -> &[i64] {
        &self.time_labels
    }

    pub fn snapshot(&self, t: usize) -> Result<&Snapshot> {
        self.snapshots.get(t).ok_or(Error::IndexOutOfRange {
            what: "snapshot index",
            value: t,
            limit: self.snapshots.len(),
        })
    }

    /// The formation/dissolution sets of the transition `G_{t-1} -> G_t`.
    pub fn derive_transition(&self, t: usize) -> Result<TransitionPair> {
        if t == 0 || t >= self.snapshots.len() {
            return Err(Error::IndexOutOfRange {
                what: "transition time",
                value: t,
                limit: self.snapshots.len(),
            });
        }
        let prev = &self.snapshots[t - 1].edges;
        let curr = &self.snapshots[t].edges;
        Ok(TransitionPair {
            time: t,
            formed: curr.difference(prev).copied().collect(),
            dissolved: prev.difference(curr).copied().collect(),
        })
    }

    /// The last `p` transitions ending at time `t`, newest first.
    ///
    /// Requires `1 <= p <= t`; `p = t` yields every available transition.
    pub fn window_transitions(&self, t: usize, p: usize) -> Result<Vec<TransitionPair>> {
        if p == 0 || p > t {
            return Err(Error::IndexOutOfRange {
                what: "window length",
                value: p,
                limit: t,
            });
        }
        (0..p).map(|k| self.derive_transition(t - k)).collect()
    }

    /// Union of the edge sets of snapshots `0..=up_to`.
    pub fn union_graph(&self, up_to: usize) -> Result<Snapshot> {
        if up_to >= self.snapshots.len() {
            return Err(Error::IndexOutOfRange {
                what: "snapshot index",
                value: up_to,
                limit: self.snapshots.len(),
            });
        }
        let mut edges = BTreeSet::new();
        for snap in &self.snapshots[..=up_to] {
            edges.extend(snap.edges.iter().copied());
        }
        Ok(Snapshot { time: up_to, edges })
    }

    /// A copy keeping only snapshots `0..=last_t`.
    ///
    /// The node set (and labels) are preserved unchanged, so embeddings
    /// trained on the truncated view stay index-compatible with the full
    /// network.
    pub fn truncated(&self, last_t: usize) -> Result<Self> {
        if last_t >= self.snapshots.len() {
            return Err(Error::IndexOutOfRange {
                what: "snapshot index",
                value: last_t,
                limit: self.snapshots.len(),
            });
        }
        Ok(TemporalNetwork {
            snapshots: self.snapshots[..=last_t].to_vec(),
            node_labels: self.node_labels.clone(),
            time_labels: self.time_labels[..=last_t].to_vec(),
        })
    }

    /// A copy with every snapshot closed under edge reversal, for datasets
    /// that are undirected at heart.
    pub fn symmetrized(&self) -> Self {
        let snapshots = self
            .snapshots
            .iter()
            .map(|s| {
                let mut edges = s.edges.clone();
                edges.extend(s.edges.iter().map(|&(i, j)| (j, i)));
                Snapshot { time: s.time, edges }
            })
            .collect();
        TemporalNetwork {
            snapshots,
            node_labels: self.node_labels.clone(),
            time_labels: self.time_labels.clone(),
        }
    }

    /// Serializes to the temporal edge-list text format: one
    /// `source,target,time` line per edge, sorted by `(time, source, target)`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for snap in &self.snapshots {
            let time = self.time_labels[snap.time];
            for (i, j) in snap.edges() {
                writeln!(
                    out,
                    "{},{},{}",
                    self.node_labels[i.index()],
                    self.node_labels[j.index()],
                    time
                )?;
            }
        }
        Ok(())
    }

    pub fn write_edge_list_file<P: AsRef<std::path::Path>>(&self, path: P) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_edge_list(std::io::BufWriter::new(file))
    }
}

/// Parses the temporal edge-list format: UTF-8 text, one edge per line,
/// three comma-separated fields `source,target,time`. Lines beginning with
/// `#` and blank lines are ignored. Parse errors name the 1-based line
/// number.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Vec<(String, String, i64)>> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split(',');
        let src = fields.next().map(str::trim).unwrap_or("");
        let dst = fields.next().map(str::trim);
        let time = fields.next().map(str::trim);
        let (dst, time) = match (dst, time) {
            (Some(d), Some(t)) => (d, t),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 3 comma-separated fields, got `{trimmed}`"),
                })
            }
        };
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 3 comma-separated fields, got `{trimmed}`"),
            });
        }
        if src.is_empty() || dst.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty source or target label".to_string(),
            });
        }
        let time: i64 = time.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("time label `{time}` is not an integer"),
        })?;
        rows.push((src.to_string(), dst.to_string(), time));
    }
    Ok(rows)
}

/// Reads and ingests a temporal edge-list file.
pub fn ingest_edge_list_file<P: AsRef<std::path::Path>>(path: P) -> Result<TemporalNetwork> {
    let file = std::fs::File::open(path)?;
    let rows = parse_edge_list(std::io::BufReader::new(file))?;
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    TemporalNetwork::from_rows(&rows)
}
