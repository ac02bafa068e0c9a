//! Experiment harness: dataset loading, experiment/rolling/sweep runners,
//! result tables, model files, and the CLI surface.

pub mod cli;
pub mod config;
pub mod experiment;
pub mod model_io;

pub use experiment::{
    run_experiment, run_rolling, run_sweep, DatasetSource, ExperimentConfig, Method, ResultRow,
    ResultsTable, SweepParam, SweepTable,
};
pub use model_io::{load_model, save_model};
