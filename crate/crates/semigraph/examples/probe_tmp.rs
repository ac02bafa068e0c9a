use semigraph::evaluation::evaluate;
use semigraph::graph::{NodeId, Task};
use semigraph::harness::{run_experiment, DatasetSource, ExperimentConfig, Method};
use semigraph::prediction::PredictionMode;
use semigraph::sampling::WalkConfig;
use semigraph::synth::{churn_weight, generate, SynthConfig};
use semigraph::training::TrainConfig;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let epochs: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let walk_length: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(20);
    let churn: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(12.0);
    let p_in: f64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(0.2);
    let p_out: f64 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(0.02);
    let lambda: f64 = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let k_neg: usize = args.get(7).and_then(|s| s.parse().ok()).unwrap_or(5);
    let mode = match args.get(8).map(String::as_str) {
        Some("simple") => PredictionMode::Simple,
        Some("subtractive") => PredictionMode::Subtractive,
        _ => PredictionMode::Additive,
    };
    let past_window: Option<usize> = args.get(9).and_then(|s| s.parse().ok());
    let eta1: f64 = args.get(10).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let eta2: f64 = args.get(11).and_then(|s| s.parse().ok()).unwrap_or(5e-6);

    let synth = SynthConfig {
        num_nodes: 200,
        num_communities: 4,
        snapshots: 8,
        rewire_rate: 0.15,
        p_in,
        p_out,
        churn_asymmetry: churn,
        seed: 424242,
    };

    // Bayes-ceiling reference: rank by the generator's own churn weight
    let net = generate(&synth).unwrap();
    let t = net.len() - 2;
    let sc = synth.clone();
    let oracle = move |i: NodeId, j: NodeId| churn_weight(&sc, i, j);
    for task in Task::ALL {
        let auc = evaluate(&oracle, &net, t, task).unwrap().auc;
        println!("churn-weight oracle {task}: {auc:.4}");
    }

    let mut cfg = ExperimentConfig::new(DatasetSource::Synth(synth));
    cfg.methods = vec![Method::SemiGraph, Method::Supervised, Method::GraphEmb];
    cfg.prediction_mode = mode;
    cfg.train = TrainConfig {
        epochs,
        lambda_f: lambda,
        lambda_d: lambda,
        k_neg,
        past_window,
        eta1,
        eta2,
        walk: WalkConfig {
            walk_length,
            window: 5,
            walks_per_node: 5,
            ..WalkConfig::default()
        },
        ..TrainConfig::default()
    };
    cfg.seeds = vec![1, 2, 3, 4, 5];

    let start = std::time::Instant::now();
    let table = run_experiment(&cfg).unwrap();
    println!(
        "epochs={epochs} walk_length={walk_length} churn={churn} p_in={p_in} p_out={p_out} lambda={lambda} k={k_neg} mode={:?} p_win={:?}  ({:.1?})",
        mode,
        past_window,
        start.elapsed()
    );
    for row in &table.rows {
        println!("  {:<12} {:<12} auc {:.4}", row.method, row.task.as_str(), row.auc);
    }
    for row in &table.per_seed {
        println!(
            "    seed {} {:<12} {:<12} {:.4}",
            row.seed,
            row.method,
            row.task.as_str(),
            row.auc
        );
    }
}
