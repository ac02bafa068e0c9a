//! The `semigraph` command-line interface.
//!
//! Subcommands: `ingest`, `synth`, `train`, `predict`, `evaluate`,
//! `rolling`, `sweep`. Every hyperparameter flag can also be supplied
//! through `--config FILE` as a `key = value` line; an explicit flag wins.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::graph::{ingest_edge_list_file, Task, TemporalNetwork};
use crate::harness::config::ConfigMap;
use crate::harness::experiment::{
    run_experiment, run_rolling, run_sweep, write_experiment_outputs, write_predictions_csv,
    DatasetSource, ExperimentConfig, Method, ResultsTable, SweepParam,
};
use crate::harness::model_io::{load_model, save_model};
use crate::prediction::{rank_predictions, PredictionMode};
use crate::synth::SynthConfig;
use crate::training::{train, TrainConfig, TrainMode};

#[derive(Parser)]
#[command(
    name = "semigraph",
    version,
    about = "Dynamic link formation/dissolution prediction with semi-supervised complex embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a temporal edge list and write it back in canonical order.
    Ingest(IngestArgs),
    /// Generate a synthetic rewiring network and write it as an edge list.
    Synth(SynthArgs),
    /// Train embeddings and save a model file.
    Train(TrainArgs),
    /// Rank candidate pairs with a trained model.
    Predict(PredictArgs),
    /// Evaluate methods at one origin and write result tables.
    Evaluate(EvalArgs),
    /// Evaluate at every origin in a range (rolling-origin protocol).
    Rolling(RollingArgs),
    /// Sweep d or lambda for the semigraph method.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Temporal edge list: one `source,target,time` line per edge.
    #[arg(long)]
    input: PathBuf,
    /// Canonical output path, sorted by (time, source, target).
    #[arg(long)]
    output: PathBuf,
    /// Close every snapshot under edge reversal (undirected data).
    #[arg(long)]
    symmetrize: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 200)]
    nodes: usize,
    #[arg(long, default_value_t = 4)]
    communities: usize,
    #[arg(long, default_value_t = 8)]
    snapshots: usize,
    #[arg(long, default_value_t = 0.2)]
    p_in: f64,
    #[arg(long, default_value_t = 0.02)]
    p_out: f64,
    #[arg(long, default_value_t = 0.15)]
    rewire_rate: f64,
    #[arg(long, default_value_t = 6.0)]
    churn_asymmetry: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Training hyperparameters, all optional so that config-file values can
/// fill the gaps.
#[derive(Args, Default)]
struct TrainFlags {
    /// Embedding dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Sets both lambda-f and lambda-d.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    lambda_f: Option<f64>,
    #[arg(long)]
    lambda_d: Option<f64>,
    /// Vector learning rate.
    #[arg(long)]
    eta1: Option<f64>,
    /// Phase learning rate.
    #[arg(long)]
    eta2: Option<f64>,
    /// Past transitions to learn from: a count, or `all`.
    #[arg(long)]
    past_window: Option<String>,
    #[arg(long)]
    epochs: Option<usize>,
    /// Negatives per positive.
    #[arg(long)]
    k_neg: Option<usize>,
    #[arg(long)]
    walks_per_node: Option<usize>,
    #[arg(long)]
    walk_length: Option<usize>,
    /// Context window along each walk.
    #[arg(long)]
    window: Option<usize>,
    /// Walk along out-edges only instead of the undirected view.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    directed_walks: Option<bool>,
    #[arg(long)]
    seed: Option<u64>,
}

impl TrainFlags {
    fn build(&self, file: &ConfigMap) -> Result<TrainConfig> {
        let mut cfg = TrainConfig::default();
        if let Some(v) = file.merge(self.dim, "dim")? {
            cfg.dim = v;
        }
        if let Some(v) = file.merge(self.lambda, "lambda")? {
            cfg.lambda_f = v;
            cfg.lambda_d = v;
        }
        if let Some(v) = file.merge(self.lambda_f, "lambda-f")? {
            cfg.lambda_f = v;
        }
        if let Some(v) = file.merge(self.lambda_d, "lambda-d")? {
            cfg.lambda_d = v;
        }
        if let Some(v) = file.merge(self.eta1, "eta1")? {
            cfg.eta1 = v;
        }
        if let Some(v) = file.merge(self.eta2, "eta2")? {
            cfg.eta2 = v;
        }
        if let Some(v) = file.merge(self.past_window.clone(), "past-window")? {
            cfg.past_window = parse_past_window(&v)?;
        }
        if let Some(v) = file.merge(self.epochs, "epochs")? {
            cfg.epochs = v;
        }
        if let Some(v) = file.merge(self.k_neg, "k-neg")? {
            cfg.k_neg = v;
        }
        if let Some(v) = file.merge(self.walks_per_node, "walks-per-node")? {
            cfg.walk.walks_per_node = v;
        }
        if let Some(v) = file.merge(self.walk_length, "walk-length")? {
            cfg.walk.walk_length = v;
        }
        if let Some(v) = file.merge(self.window, "window")? {
            cfg.walk.window = v;
        }
        if let Some(v) = file.merge(self.directed_walks, "directed-walks")? {
            cfg.walk.directed = v;
        }
        if let Some(v) = file.merge(self.seed, "seed")? {
            cfg.seed = v;
        }
        cfg.walk.seed = cfg.seed;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_past_window(raw: &str) -> Result<Option<usize>> {
    if raw.eq_ignore_ascii_case("all") {
        Ok(None)
    } else {
        raw.parse::<usize>().map(Some).map_err(|_| {
            Error::InvalidConfig(format!("past-window must be a count or `all`, got `{raw}`"))
        })
    }
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    input: PathBuf,
    /// Snapshot index used as the current network; defaults to the last.
    #[arg(long)]
    origin: Option<usize>,
    /// semigraph | supervised | graphemb
    #[arg(long, default_value = "semigraph")]
    mode: String,
    #[arg(long)]
    model_out: PathBuf,
    /// Per-epoch loss CSV.
    #[arg(long)]
    metrics_out: Option<PathBuf>,
    #[arg(long)]
    symmetrize: bool,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    train: TrainFlags,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// formation | dissolution
    #[arg(long)]
    task: String,
    /// Origin snapshot; defaults to the last. If the next snapshot exists,
    /// the label column is filled from it.
    #[arg(long)]
    origin: Option<usize>,
    /// simple | additive | subtractive
    #[arg(long, default_value = "additive")]
    prediction_mode: String,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    symmetrize: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Temporal edge-list file; omit together with --synth to generate data.
    #[arg(long, conflicts_with = "synth")]
    input: Option<PathBuf>,
    /// Use the synthetic generator instead of a file.
    #[arg(long)]
    synth: bool,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    communities: Option<usize>,
    #[arg(long)]
    snapshots: Option<usize>,
    #[arg(long)]
    p_in: Option<f64>,
    #[arg(long)]
    p_out: Option<f64>,
    #[arg(long)]
    rewire_rate: Option<f64>,
    #[arg(long)]
    churn_asymmetry: Option<f64>,
    /// Seed for the synthetic generator (training seeds come from --seeds).
    #[arg(long)]
    synth_seed: Option<u64>,
    #[arg(long)]
    origin: Option<usize>,
    /// Comma-separated subset of: semigraph,supervised,graphemb,AA,PA,AA-all,PA-all,LastTime
    #[arg(long)]
    methods: Option<String>,
    /// Comma-separated training seeds for learned methods.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    prediction_mode: Option<String>,
    /// Negate heuristic scores on the dissolution task.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    complementary: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    symmetrize: Option<bool>,
    /// Re-run each origin on a dataset truncated at t+1 and require
    /// identical rows.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    verify_leakage: Option<bool>,
    #[arg(long)]
    dataset_name: Option<String>,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    train: TrainFlags,
}

impl EvalArgs {
    fn build(&self) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(path) => ConfigMap::load(path)?,
            None => ConfigMap::default(),
        };
        let synth = self.synth || file.get::<bool>("synth")?.unwrap_or(false);
        let input = match &self.input {
            Some(p) => Some(p.clone()),
            None => file.get::<PathBuf>("dataset")?,
        };
        let dataset = if let Some(path) = input {
            DatasetSource::File(path)
        } else if synth {
            let mut s = SynthConfig::default();
            if let Some(v) = file.merge(self.nodes, "nodes")? {
                s.num_nodes = v;
            }
            if let Some(v) = file.merge(self.communities, "communities")? {
                s.num_communities = v;
            }
            if let Some(v) = file.merge(self.snapshots, "snapshots")? {
                s.snapshots = v;
            }
            if let Some(v) = file.merge(self.p_in, "p-in")? {
                s.p_in = v;
            }
            if let Some(v) = file.merge(self.p_out, "p-out")? {
                s.p_out = v;
            }
            if let Some(v) = file.merge(self.rewire_rate, "rewire-rate")? {
                s.rewire_rate = v;
            }
            if let Some(v) = file.merge(self.churn_asymmetry, "churn-asymmetry")? {
                s.churn_asymmetry = v;
            }
            if let Some(v) = file.merge(self.synth_seed, "synth-seed")? {
                s.seed = v;
            }
            DatasetSource::Synth(s)
        } else {
            return Err(Error::InvalidConfig(
                "either --input or --synth is required".into(),
            ));
        };

        let mut cfg = ExperimentConfig::new(dataset);
        cfg.train = self.train.build(&file)?;
        cfg.origin = file.merge(self.origin, "origin")?;
        if let Some(raw) = file.merge(self.methods.clone(), "methods")? {
            cfg.methods = parse_list::<Method>(&raw)?;
        }
        if let Some(raw) = file.merge(self.seeds.clone(), "seeds")? {
            cfg.seeds = parse_list::<u64>(&raw)
                .map_err(|_| Error::InvalidConfig(format!("bad seed list `{raw}`")))?;
        }
        if let Some(raw) = file.merge(self.prediction_mode.clone(), "prediction-mode")? {
            cfg.prediction_mode = PredictionMode::from_str(&raw)?;
        }
        if let Some(v) = file.merge(self.complementary, "complementary")? {
            cfg.complementary = v;
        }
        if let Some(v) = file.merge(self.symmetrize, "symmetrize")? {
            cfg.symmetrize = v;
        }
        if let Some(v) = file.merge(self.verify_leakage, "verify-leakage")? {
            cfg.verify_leakage = v;
        }
        if let Some(v) = file.merge(self.dataset_name.clone(), "dataset-name")? {
            cfg.dataset_name = v;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct RollingArgs {
    #[command(flatten)]
    eval: EvalArgs,
    /// First evaluation origin.
    #[arg(long)]
    t_start: Option<usize>,
    /// Last evaluation origin (inclusive).
    #[arg(long)]
    t_end: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    eval: EvalArgs,
    /// d | lambda
    #[arg(long)]
    param: String,
    /// Comma-separated values, e.g. `0,0.01,0.05,0.2,1.0`.
    #[arg(long)]
    values: String,
}

fn parse_list<T: FromStr>(raw: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| Error::InvalidConfig(format!("bad list item `{s}`: {e}")))
        })
        .collect()
}

fn load_input(path: &PathBuf, symmetrize: bool) -> Result<TemporalNetwork> {
    let net = ingest_edge_list_file(path)?;
    Ok(if symmetrize { net.symmetrized() } else { net })
}

fn cmd_ingest(args: &IngestArgs) -> Result<()> {
    let net = load_input(&args.input, args.symmetrize)?;
    net.write_edge_list_file(&args.output)?;
    let total_edges: usize = net.snapshots().iter().map(|s| s.edge_count()).sum();
    println!(
        "ingested {}: {} nodes, {} snapshots, {} edges -> {}",
        args.input.display(),
        net.node_count(),
        net.len(),
        total_edges,
        args.output.display()
    );
    Ok(())
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let cfg = SynthConfig {
        num_nodes: args.nodes,
        num_communities: args.communities,
        snapshots: args.snapshots,
        p_in: args.p_in,
        p_out: args.p_out,
        rewire_rate: args.rewire_rate,
        churn_asymmetry: args.churn_asymmetry,
        seed: args.seed,
    };
    let net = crate::synth::generate(&cfg)?;
    net.write_edge_list_file(&args.output)?;
    println!(
        "generated {} nodes x {} snapshots ({} edges per snapshot) -> {}",
        net.node_count(),
        net.len(),
        net.snapshot(0)?.edge_count(),
        args.output.display()
    );
    Ok(())
}

fn cmd_train(args: &TrainArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::default(),
    };
    let cfg = args.train.build(&file)?;
    let mode = TrainMode::from_str(&args.mode)?;
    let net = load_input(&args.input, args.symmetrize)?;
    let origin = args.origin.unwrap_or(net.len().saturating_sub(1));
    let (state, report) = train(&net, origin, &cfg, mode)?;
    save_model(&state, &args.model_out)?;
    if let Some(path) = &args.metrics_out {
        report.write_csv(std::fs::File::create(path)?)?;
    }
    if let Some(last) = report.epochs.last() {
        println!(
            "trained {} at origin {origin} for {} epochs: L_f = {:.4}, L_d = {:.4} -> {}",
            mode.as_str(),
            report.epochs.len(),
            last.l_f,
            last.l_d,
            args.model_out.display()
        );
    }
    Ok(())
}

fn cmd_predict(args: &PredictArgs) -> Result<()> {
    let net = load_input(&args.input, args.symmetrize)?;
    let state = load_model(&args.model)?;
    if state.num_nodes() != net.node_count() {
        return Err(Error::NodeSetMismatch {
            state_nodes: state.num_nodes(),
            net_nodes: net.node_count(),
        });
    }
    let task = Task::from_str(&args.task)?;
    let mode = PredictionMode::from_str(&args.prediction_mode)?;
    let origin = args.origin.unwrap_or(net.len().saturating_sub(1));
    let mut ranked = rank_predictions(&state, &net, origin, task, mode)?;
    if origin + 1 < net.len() {
        let transition = net.derive_transition(origin + 1)?;
        let target = match task {
            Task::Formation => &transition.formed,
            Task::Dissolution => &transition.dissolved,
        };
        for p in &mut ranked {
            p.label = Some(target.contains(&(p.i, p.j)));
        }
    }
    write_predictions_csv(&net, &ranked, std::fs::File::create(&args.output)?)?;
    println!(
        "ranked {} {task} candidates at origin {origin} -> {}",
        ranked.len(),
        args.output.display()
    );
    Ok(())
}

fn print_table(table: &ResultsTable) {
    println!("{:<12} {:<12} {:<12} {:>8} {:>8}", "dataset", "method", "task", "origin", "auc");
    for r in &table.rows {
        println!(
            "{:<12} {:<12} {:<12} {:>8} {:>8.4}",
            r.dataset, r.method, r.task, r.origin, r.auc
        );
    }
    for s in &table.skipped {
        println!(
            "{:<12} {:<12} {:<12} {:>8}  skipped: {}",
            s.dataset, s.method, s.task, s.origin, s.reason
        );
    }
}

fn cmd_evaluate(args: &EvalArgs) -> Result<()> {
    let cfg = args.build()?;
    let table = run_experiment(&cfg)?;
    write_experiment_outputs(&cfg, &table, &[], &args.out_dir)?;
    print_table(&table);
    println!("wrote {}", args.out_dir.join("results.csv").display());
    Ok(())
}

fn cmd_rolling(args: &RollingArgs) -> Result<()> {
    let cfg = args.eval.build()?;
    let file = match &args.eval.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::default(),
    };
    let t_start = file
        .merge(args.t_start, "t-start")?
        .ok_or_else(|| Error::InvalidConfig("--t-start is required".into()))?;
    let t_end = file
        .merge(args.t_end, "t-end")?
        .ok_or_else(|| Error::InvalidConfig("--t-end is required".into()))?;
    let table = run_rolling(&cfg, t_start, t_end)?;
    let extra = vec![("origin-range".to_string(), format!("{t_start}..={t_end}"))];
    write_experiment_outputs(&cfg, &table, &extra, &args.eval.out_dir)?;
    print_table(&table);
    println!("wrote {}", args.eval.out_dir.join("results.csv").display());
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let cfg = args.eval.build()?;
    let param = SweepParam::from_str(&args.param)?;
    let values = parse_list::<f64>(&args.values)?;
    let table = run_sweep(&cfg, param, &values)?;
    std::fs::create_dir_all(&args.eval.out_dir)?;
    table.write_csv(std::fs::File::create(args.eval.out_dir.join("sweep.csv"))?)?;
    if !table.per_seed.is_empty() {
        table.write_per_seed_csv(std::fs::File::create(
            args.eval.out_dir.join("sweep_per_seed.csv"),
        )?)?;
    }
    let extra = vec![
        ("sweep-param".to_string(), param.as_str().to_string()),
        (
            "sweep-values".to_string(),
            values.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
        ),
    ];
    write_experiment_outputs(
        &cfg,
        &ResultsTable::default(),
        &extra,
        &args.eval.out_dir,
    )?;
    println!("{:<8} {:<12} {:>8}", "value", "task", "mean auc");
    for (value, row) in &table.rows {
        println!("{:<8} {:<12} {:>8.4}", value, row.task, row.auc);
    }
    println!("wrote {}", args.eval.out_dir.join("sweep.csv").display());
    Ok(())
}

/// Parses the process arguments and runs the selected subcommand.
pub fn run() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Rolling(args) => cmd_rolling(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}
