//! Experiment runners and result tables.
//!
//! A cell is one (method, task, origin) evaluation. Learned methods train
//! once per seed on a view truncated at the origin and are averaged over
//! seeds; heuristics are deterministic and run once. Degenerate evaluation
//! cells are recorded as skipped rows instead of aborting the run.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::baselines::{baseline_rank, BaselineKind};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate, AucResult};
use crate::graph::{ingest_edge_list_file, NodeId, Task, TemporalNetwork};
use crate::prediction::{score_pair, PredictionMode, RankedPrediction};
use crate::synth::SynthConfig;
use crate::training::{train, TrainConfig, TrainMode};

/// A method column of the results table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    SemiGraph,
    Supervised,
    GraphEmb,
    Heuristic(BaselineKind),
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::SemiGraph,
        Method::Supervised,
        Method::GraphEmb,
        Method::Heuristic(BaselineKind::AdamicAdar),
        Method::Heuristic(BaselineKind::PrefAttach),
        Method::Heuristic(BaselineKind::AdamicAdarAll),
        Method::Heuristic(BaselineKind::PrefAttachAll),
        Method::Heuristic(BaselineKind::LastTime),
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::SemiGraph => "semigraph",
            Method::Supervised => "supervised",
            Method::GraphEmb => "graphemb",
            Method::Heuristic(kind) => kind.as_str(),
        }
    }

    pub fn train_mode(self) -> Option<TrainMode> {
        match self {
            Method::SemiGraph => Some(TrainMode::SemiGraph),
            Method::Supervised => Some(TrainMode::SupervisedOnly),
            Method::GraphEmb => Some(TrainMode::EmbeddingOnly),
            Method::Heuristic(_) => None,
        }
    }

    pub fn is_learned(self) -> bool {
        self.train_mode().is_some()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "semigraph" => Ok(Method::SemiGraph),
            "supervised" => Ok(Method::Supervised),
            "graphemb" => Ok(Method::GraphEmb),
            _ => BaselineKind::from_str(s).map(Method::Heuristic),
        }
    }
}

/// Where the experiment's data comes from.
#[derive(Debug, Clone)]
pub enum DatasetSource {
    File(PathBuf),
    Synth(SynthConfig),
}

/// Everything needed to run one experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    pub dataset_name: String,
    /// Evaluation origin `t`; defaults to the last transition,
    /// i.e. `len - 2`.
    pub origin: Option<usize>,
    pub methods: Vec<Method>,
    pub train: TrainConfig,
    pub prediction_mode: PredictionMode,
    /// Rank dissolution heuristics by negated score.
    pub complementary: bool,
    /// Close every snapshot under edge reversal before anything else.
    pub symmetrize: bool,
    pub seeds: Vec<u64>,
    /// Re-run every learned cell on a dataset truncated at `t+1` and fail
    /// if any row changes.
    pub verify_leakage: bool,
}

impl ExperimentConfig {
    pub fn new(dataset: DatasetSource) -> Self {
        let dataset_name = match &dataset {
            DatasetSource::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into()),
            DatasetSource::Synth(_) => "synth".into(),
        };
        ExperimentConfig {
            dataset,
            dataset_name,
            origin: None,
            methods: vec![Method::SemiGraph],
            train: TrainConfig::default(),
            prediction_mode: PredictionMode::Additive,
            complementary: true,
            symmetrize: false,
            seeds: vec![1, 2, 3, 4, 5],
            verify_leakage: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("at least one method required".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("at least one seed required".into()));
        }
        self.train.validate()
    }

    /// Ingests or generates the dataset, applying symmetrization if asked.
    pub fn load_dataset(&self) -> Result<TemporalNetwork> {
        let net = match &self.dataset {
            DatasetSource::File(path) => ingest_edge_list_file(path)?,
            DatasetSource::Synth(cfg) => crate::synth::generate(cfg)?,
        };
        Ok(if self.symmetrize { net.symmetrized() } else { net })
    }
}

/// One aggregated result cell (seed-averaged for learned methods).
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub dataset: String,
    pub method: String,
    pub task: Task,
    pub origin: usize,
    pub auc: f64,
    pub positives: usize,
    pub negatives: usize,
}

/// One per-seed result cell for a learned method.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedRow {
    pub dataset: String,
    pub method: String,
    pub task: Task,
    pub origin: usize,
    pub seed: u64,
    pub auc: f64,
    pub positives: usize,
    pub negatives: usize,
}

/// A cell that could not be evaluated, with the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedCell {
    pub dataset: String,
    pub method: String,
    pub task: Task,
    pub origin: usize,
    pub reason: String,
}

/// All rows produced by an experiment or rolling run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultsTable {
    pub rows: Vec<ResultRow>,
    pub per_seed: Vec<SeedRow>,
    pub skipped: Vec<SkippedCell>,
}

impl ResultsTable {
    pub fn row(&self, method: &str, task: Task) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.method == method && r.task == task)
    }

    /// `dataset,method,task,origin_t,auc,positives,negatives`
    pub fn write_results_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["dataset", "method", "task", "origin_t", "auc", "positives", "negatives"])?;
        for r in &self.rows {
            w.write_record([
                r.dataset.as_str(),
                r.method.as_str(),
                r.task.as_str(),
                &r.origin.to_string(),
                &r.auc.to_string(),
                &r.positives.to_string(),
                &r.negatives.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_per_seed_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "dataset", "method", "task", "origin_t", "seed", "auc", "positives", "negatives",
        ])?;
        for r in &self.per_seed {
            w.write_record([
                r.dataset.as_str(),
                r.method.as_str(),
                r.task.as_str(),
                &r.origin.to_string(),
                &r.seed.to_string(),
                &r.auc.to_string(),
                &r.positives.to_string(),
                &r.negatives.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_skipped_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["dataset", "method", "task", "origin_t", "reason"])?;
        for r in &self.skipped {
            w.write_record([
                r.dataset.as_str(),
                r.method.as_str(),
                r.task.as_str(),
                &r.origin.to_string(),
                r.reason.as_str(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn heuristic_scores(
    net: &TemporalNetwork,
    t: usize,
    task: Task,
    kind: BaselineKind,
    complementary: bool,
) -> Result<std::collections::HashMap<(NodeId, NodeId), f64>> {
    let ranked = baseline_rank(net, t, task, kind, complementary)?;
    Ok(ranked.into_iter().map(|r| ((r.i, r.j), r.score)).collect())
}

fn evaluate_heuristic(
    net: &TemporalNetwork,
    t: usize,
    task: Task,
    kind: BaselineKind,
    complementary: bool,
) -> Result<AucResult> {
    let scores = heuristic_scores(net, t, task, kind, complementary)?;
    evaluate(&|i: NodeId, j: NodeId| scores[&(i, j)], net, t, task)
}

/// Runs one origin's cells, appending to `table`. Training sees only a view
/// truncated at the origin; evaluation labels come from `origin + 1`.
fn run_at_origin(
    cfg: &ExperimentConfig,
    net: &TemporalNetwork,
    origin: usize,
    table: &mut ResultsTable,
) -> Result<()> {
    if origin + 1 >= net.len() {
        return Err(Error::IndexOutOfRange {
            what: "evaluation origin",
            value: origin,
            limit: net.len().saturating_sub(1),
        });
    }
    let skip = |method: Method, task: Task, reason: String, table: &mut ResultsTable| {
        table.skipped.push(SkippedCell {
            dataset: cfg.dataset_name.clone(),
            method: method.as_str().to_string(),
            task,
            origin,
            reason,
        });
    };

    for &method in &cfg.methods {
        match method.train_mode() {
            None => {
                let Method::Heuristic(kind) = method else { unreachable!() };
                for task in Task::ALL {
                    let complementary = cfg.complementary && task == Task::Dissolution;
                    match evaluate_heuristic(net, origin, task, kind, complementary) {
                        Ok(res) => table.rows.push(ResultRow {
                            dataset: cfg.dataset_name.clone(),
                            method: method.as_str().to_string(),
                            task,
                            origin,
                            auc: res.auc,
                            positives: res.positives,
                            negatives: res.negatives,
                        }),
                        Err(e @ (Error::DegenerateTask { .. } | Error::AucUndefined { .. })) => {
                            skip(method, task, e.to_string(), table)
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
            Some(mode) => {
                if origin == 0 {
                    for task in Task::ALL {
                        skip(method, task, "no past transition before origin 0".into(), table);
                    }
                    continue;
                }
                let train_view = net.truncated(origin)?;
                let mut per_task: [Vec<AucResult>; 2] = [Vec::new(), Vec::new()];
                for &seed in &cfg.seeds {
                    let train_cfg = TrainConfig {
                        seed,
                        walk: crate::sampling::WalkConfig { seed, ..cfg.train.walk.clone() },
                        ..cfg.train.clone()
                    };
                    let (state, _report) = train(&train_view, origin, &train_cfg, mode)?;
                    for (slot, task) in Task::ALL.into_iter().enumerate() {
                        let scorer = |i: NodeId, j: NodeId| {
                            score_pair(&state, i, j, task, cfg.prediction_mode)
                        };
                        match evaluate(&scorer, net, origin, task) {
                            Ok(res) => {
                                table.per_seed.push(SeedRow {
                                    dataset: cfg.dataset_name.clone(),
                                    method: method.as_str().to_string(),
                                    task,
                                    origin,
                                    seed,
                                    auc: res.auc,
                                    positives: res.positives,
                                    negatives: res.negatives,
                                });
                                per_task[slot].push(res);
                            }
                            Err(e @ (Error::DegenerateTask { .. } | Error::AucUndefined { .. })) => {
                                skip(method, task, e.to_string(), table)
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
                for (slot, task) in Task::ALL.into_iter().enumerate() {
                    let results = &per_task[slot];
                    if results.is_empty() {
                        continue;
                    }
                    let mean = results.iter().map(|r| r.auc).sum::<f64>() / results.len() as f64;
                    table.rows.push(ResultRow {
                        dataset: cfg.dataset_name.clone(),
                        method: method.as_str().to_string(),
                        task,
                        origin,
                        auc: mean,
                        positives: results[0].positives,
                        negatives: results[0].negatives,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Runs every configured method at one origin (default: the last transition)
/// and returns the assembled table.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultsTable> {
    cfg.validate()?;
    let net = cfg.load_dataset()?;
    if net.len() < 2 {
        return Err(Error::InvalidConfig(
            "dataset needs at least two snapshots".into(),
        ));
    }
    let origin = cfg.origin.unwrap_or(net.len() - 2);
    let mut table = ResultsTable::default();
    run_at_origin(cfg, &net, origin, &mut table)?;
    if cfg.verify_leakage {
        verify_no_leakage(cfg, &net, origin, &table)?;
    }
    Ok(table)
}

/// Repeats the experiment at every origin in `t_start..=t_end`.
pub fn run_rolling(cfg: &ExperimentConfig, t_start: usize, t_end: usize) -> Result<ResultsTable> {
    cfg.validate()?;
    if t_start > t_end {
        return Err(Error::InvalidConfig("t-start must not exceed t-end".into()));
    }
    let net = cfg.load_dataset()?;
    let mut table = ResultsTable::default();
    for origin in t_start..=t_end {
        run_at_origin(cfg, &net, origin, &mut table)?;
        if cfg.verify_leakage {
            let slice = ResultsTable {
                rows: table.rows.iter().filter(|r| r.origin == origin).cloned().collect(),
                per_seed: table.per_seed.iter().filter(|r| r.origin == origin).cloned().collect(),
                skipped: table.skipped.iter().filter(|r| r.origin == origin).cloned().collect(),
            };
            verify_no_leakage(cfg, &net, origin, &slice)?;
        }
    }
    Ok(table)
}

/// Re-runs one origin on a copy of the dataset truncated at `t+1` and
/// demands identical rows; any difference means some cell read snapshots
/// beyond the transition it predicts.
fn verify_no_leakage(
    cfg: &ExperimentConfig,
    net: &TemporalNetwork,
    origin: usize,
    observed: &ResultsTable,
) -> Result<()> {
    let truncated = net.truncated(origin + 1)?;
    let mut replay = ResultsTable::default();
    run_at_origin(cfg, &truncated, origin, &mut replay)?;
    if replay != *observed {
        return Err(Error::Leakage { origin });
    }
    Ok(())
}

/// Which hyperparameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Dim,
    Lambda,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Dim => "d",
            SweepParam::Lambda => "lambda",
        }
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d" | "dim" => Ok(SweepParam::Dim),
            "lambda" => Ok(SweepParam::Lambda),
            other => Err(Error::InvalidConfig(format!(
                "unknown sweep parameter `{other}` (expected d or lambda)"
            ))),
        }
    }
}

/// Value-tagged result rows from a sweep.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepTable {
    pub param: String,
    pub rows: Vec<(f64, ResultRow)>,
    pub per_seed: Vec<(f64, SeedRow)>,
    pub skipped: Vec<(f64, SkippedCell)>,
}

impl SweepTable {
    pub fn mean_auc(&self, value: f64, task: Task) -> Option<f64> {
        self.rows
            .iter()
            .find(|(v, r)| *v == value && r.task == task)
            .map(|(_, r)| r.auc)
    }

    /// `dataset,method,task,origin_t,param,value,auc,positives,negatives`
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "dataset", "method", "task", "origin_t", "param", "value", "auc", "positives",
            "negatives",
        ])?;
        for (value, r) in &self.rows {
            w.write_record([
                r.dataset.as_str(),
                r.method.as_str(),
                r.task.as_str(),
                &r.origin.to_string(),
                self.param.as_str(),
                &value.to_string(),
                &r.auc.to_string(),
                &r.positives.to_string(),
                &r.negatives.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_per_seed_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "dataset", "method", "task", "origin_t", "param", "value", "seed", "auc",
            "positives", "negatives",
        ])?;
        for (value, r) in &self.per_seed {
            w.write_record([
                r.dataset.as_str(),
                r.method.as_str(),
                r.task.as_str(),
                &r.origin.to_string(),
                self.param.as_str(),
                &value.to_string(),
                &r.seed.to_string(),
                &r.auc.to_string(),
                &r.positives.to_string(),
                &r.negatives.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sweeps the SemiGraph method over `values` of the chosen parameter.
/// Sweeping lambda sets `lambda_f = lambda_d = value`.
pub fn run_sweep(cfg: &ExperimentConfig, param: SweepParam, values: &[f64]) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::InvalidConfig("sweep needs at least one value".into()));
    }
    let mut table = SweepTable {
        param: param.as_str().to_string(),
        ..SweepTable::default()
    };
    for &value in values {
        let mut run_cfg = cfg.clone();
        run_cfg.methods = vec![Method::SemiGraph];
        match param {
            SweepParam::Lambda => {
                if value < 0.0 {
                    return Err(Error::InvalidConfig("lambda must be non-negative".into()));
                }
                run_cfg.train.lambda_f = value;
                run_cfg.train.lambda_d = value;
            }
            SweepParam::Dim => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "dimension sweep value {value} is not a positive integer"
                    )));
                }
                run_cfg.train.dim = value as usize;
            }
        }
        let result = run_experiment(&run_cfg)?;
        table.rows.extend(result.rows.into_iter().map(|r| (value, r)));
        table.per_seed.extend(result.per_seed.into_iter().map(|r| (value, r)));
        table.skipped.extend(result.skipped.into_iter().map(|r| (value, r)));
    }
    Ok(table)
}

/// Ranked-prediction CSV: `task,i,j,score,label` with `i`/`j` written as the
/// dataset's node labels and an empty label column when ground truth is
/// unknown.
pub fn write_predictions_csv<W: Write>(
    net: &TemporalNetwork,
    predictions: &[RankedPrediction],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["task", "i", "j", "score", "label"])?;
    for p in predictions {
        let label = match p.label {
            Some(true) => "1".to_string(),
            Some(false) => "0".to_string(),
            None => String::new(),
        };
        w.write_record([
            p.task.as_str(),
            net.node_label(p.i),
            net.node_label(p.j),
            &p.score.to_string(),
            &label,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the run manifest: tool version, a SHA-256 hash of the canonical
/// config rendering, and every effective setting, as flat `key = value`
/// lines. Rows are reproducible from the recorded seed list plus this
/// config.
pub fn write_manifest<W: Write>(cfg: &ExperimentConfig, extra: &[(String, String)], mut out: W) -> Result<()> {
    let mut entries: Vec<(String, String)> = vec![
        ("tool".into(), "semigraph".into()),
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ("dataset-name".into(), cfg.dataset_name.clone()),
    ];
    match &cfg.dataset {
        DatasetSource::File(path) => entries.push(("dataset".into(), path.display().to_string())),
        DatasetSource::Synth(s) => {
            entries.push(("synth".into(), "true".into()));
            entries.push(("nodes".into(), s.num_nodes.to_string()));
            entries.push(("communities".into(), s.num_communities.to_string()));
            entries.push(("snapshots".into(), s.snapshots.to_string()));
            entries.push(("p-in".into(), s.p_in.to_string()));
            entries.push(("p-out".into(), s.p_out.to_string()));
            entries.push(("rewire-rate".into(), s.rewire_rate.to_string()));
            entries.push(("churn-asymmetry".into(), s.churn_asymmetry.to_string()));
            entries.push(("synth-seed".into(), s.seed.to_string()));
        }
    }
    if let Some(origin) = cfg.origin {
        entries.push(("origin".into(), origin.to_string()));
    }
    entries.push((
        "methods".into(),
        cfg.methods.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(","),
    ));
    entries.push((
        "seeds".into(),
        cfg.seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
    ));
    entries.push(("prediction-mode".into(), cfg.prediction_mode.as_str().into()));
    entries.push(("complementary".into(), cfg.complementary.to_string()));
    entries.push(("symmetrize".into(), cfg.symmetrize.to_string()));
    entries.push(("verify-leakage".into(), cfg.verify_leakage.to_string()));
    let t = &cfg.train;
    entries.push(("dim".into(), t.dim.to_string()));
    entries.push(("lambda-f".into(), t.lambda_f.to_string()));
    entries.push(("lambda-d".into(), t.lambda_d.to_string()));
    entries.push(("eta1".into(), t.eta1.to_string()));
    entries.push(("eta2".into(), t.eta2.to_string()));
    entries.push((
        "past-window".into(),
        t.past_window.map(|p| p.to_string()).unwrap_or_else(|| "all".into()),
    ));
    entries.push(("epochs".into(), t.epochs.to_string()));
    entries.push(("k-neg".into(), t.k_neg.to_string()));
    entries.push(("walks-per-node".into(), t.walk.walks_per_node.to_string()));
    entries.push(("walk-length".into(), t.walk.walk_length.to_string()));
    entries.push(("window".into(), t.walk.window.to_string()));
    entries.push(("directed-walks".into(), t.walk.directed.to_string()));
    entries.extend(extra.iter().cloned());

    let canonical: String = entries
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect();
    let hash = Sha256::digest(canonical.as_bytes());
    writeln!(out, "config-hash = {}", hex_string(&hash))?;
    out.write_all(canonical.as_bytes())?;
    Ok(())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes the standard output files of an experiment run into `out_dir`.
pub fn write_experiment_outputs(
    cfg: &ExperimentConfig,
    table: &ResultsTable,
    extra_manifest: &[(String, String)],
    out_dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    table.write_results_csv(std::fs::File::create(out_dir.join("results.csv"))?)?;
    if !table.per_seed.is_empty() {
        table.write_per_seed_csv(std::fs::File::create(out_dir.join("results_per_seed.csv"))?)?;
    }
    if !table.skipped.is_empty() {
        table.write_skipped_csv(std::fs::File::create(out_dir.join("skipped.csv"))?)?;
    }
    write_manifest(cfg, extra_manifest, std::fs::File::create(out_dir.join("run_manifest.txt"))?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::WalkConfig;

    fn small_cfg() -> ExperimentConfig {
        let synth = SynthConfig {
            num_nodes: 30,
            num_communities: 3,
            snapshots: 4,
            seed: 9,
            ..SynthConfig::default()
        };
        let mut cfg = ExperimentConfig::new(DatasetSource::Synth(synth));
        cfg.train = TrainConfig {
            epochs: 2,
            walk: WalkConfig { walk_length: 8, window: 2, ..WalkConfig::default() },
            ..TrainConfig::default()
        };
        cfg.seeds = vec![1, 2];
        cfg
    }

    #[test]
    fn heuristic_only_run_is_deterministic_and_complete() {
        let mut cfg = small_cfg();
        cfg.methods = vec![Method::Heuristic(BaselineKind::PrefAttach)];
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 2); // formation + dissolution
        assert!(a.per_seed.is_empty());
        assert!(a.skipped.is_empty());
    }

    #[test]
    fn full_grid_produces_expected_row_counts() {
        let mut cfg = small_cfg();
        cfg.methods = Method::ALL.to_vec();
        let table = run_experiment(&cfg).unwrap();
        assert!(table.skipped.is_empty(), "unexpected skips: {:?}", table.skipped);
        assert_eq!(table.rows.len(), Method::ALL.len() * 2);
        // 3 learned methods x 2 tasks x 2 seeds
        assert_eq!(table.per_seed.len(), 3 * 2 * 2);
    }

    #[test]
    fn lambda_zero_semigraph_row_equals_supervised_row() {
        let mut cfg = small_cfg();
        cfg.methods = vec![Method::SemiGraph, Method::Supervised];
        cfg.train.lambda_f = 0.0;
        cfg.train.lambda_d = 0.0;
        let table = run_experiment(&cfg).unwrap();
        for task in Task::ALL {
            let a = table.row("semigraph", task).unwrap();
            let b = table.row("supervised", task).unwrap();
            assert_eq!(a.auc, b.auc);
        }
    }

    #[test]
    fn leakage_check_passes_on_honest_runs() {
        let mut cfg = small_cfg();
        cfg.methods = vec![Method::Supervised, Method::Heuristic(BaselineKind::LastTime)];
        cfg.verify_leakage = true;
        assert!(run_experiment(&cfg).is_ok());
    }

    #[test]
    fn rolling_over_one_origin_equals_single_experiment() {
        let mut cfg = small_cfg();
        cfg.methods = vec![Method::Heuristic(BaselineKind::AdamicAdar), Method::Supervised];
        let origin = 2;
        cfg.origin = Some(origin);
        let single = run_experiment(&cfg).unwrap();
        cfg.origin = None;
        let rolled = run_rolling(&cfg, origin, origin).unwrap();
        assert_eq!(single, rolled);
    }

    #[test]
    fn rolling_pa_all_rows_change_as_the_union_grows() {
        let mut cfg = small_cfg();
        cfg.methods = vec![Method::Heuristic(BaselineKind::PrefAttachAll)];
        let table = run_rolling(&cfg, 1, 2).unwrap();
        let aucs: Vec<f64> = table
            .rows
            .iter()
            .filter(|r| r.task == Task::Formation)
            .map(|r| r.auc)
            .collect();
        assert_eq!(aucs.len(), 2);
        assert_ne!(aucs[0], aucs[1]);
    }

    #[test]
    fn sweep_lambda_zero_reproduces_supervised_ablation() {
        let mut cfg = small_cfg();
        cfg.methods = vec![Method::Supervised];
        let supervised = run_experiment(&cfg).unwrap();
        let sweep = run_sweep(&cfg, SweepParam::Lambda, &[0.0]).unwrap();
        for task in Task::ALL {
            assert_eq!(
                sweep.mean_auc(0.0, task).unwrap(),
                supervised.row("supervised", task).unwrap().auc
            );
        }
    }

    #[test]
    fn sweep_dim_over_default_reproduces_default_run() {
        let mut cfg = small_cfg();
        cfg.methods = vec![Method::SemiGraph];
        let base = run_experiment(&cfg).unwrap();
        let sweep = run_sweep(&cfg, SweepParam::Dim, &[cfg.train.dim as f64]).unwrap();
        for task in Task::ALL {
            assert_eq!(
                sweep.mean_auc(cfg.train.dim as f64, task).unwrap(),
                base.row("semigraph", task).unwrap().auc
            );
        }
    }

    #[test]
    fn sweep_row_count_is_values_times_tasks_times_seeds() {
        let mut cfg = small_cfg();
        cfg.seeds = vec![1, 2, 3];
        let sweep = run_sweep(&cfg, SweepParam::Lambda, &[0.0, 0.1]).unwrap();
        assert_eq!(sweep.per_seed.len() + sweep.skipped.len() * cfg.seeds.len(), 2 * 2 * 3);
    }

    #[test]
    fn results_csv_has_the_documented_schema() {
        let mut cfg = small_cfg();
        cfg.methods = vec![Method::Heuristic(BaselineKind::AdamicAdar)];
        let table = run_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        table.write_results_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "dataset,method,task,origin_t,auc,positives,negatives"
        );
        assert_eq!(lines.count(), table.rows.len());
    }

    #[test]
    fn empty_method_list_is_rejected() {
        let mut cfg = small_cfg();
        cfg.methods.clear();
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn manifest_contains_hash_and_settings() {
        let cfg = small_cfg();
        let mut buf = Vec::new();
        write_manifest(&cfg, &[("origin-range".into(), "1..2".into())], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("config-hash = "));
        assert!(text.contains("dim = 3"));
        assert!(text.contains("origin-range = 1..2"));
        // same config, same hash
        let mut buf2 = Vec::new();
        write_manifest(&cfg, &[("origin-range".into(), "1..2".into())], &mut buf2).unwrap();
        assert_eq!(text, String::from_utf8(buf2).unwrap());
    }
}
