//! Seeded Monte Carlo experiments, parameter sweeps, the verification battery and result files.

mod bounds;
mod config;
mod experiment;
mod sweep;
mod verify;

pub use bounds::{bounds_table, BoundsQuery};
pub use config::{
    ExperimentConfig, FlatConfig, OutputFormat, SweepConfig, SweptParameter, DEFAULT_DELTA, DEFAULT_EPSILON,
    DEFAULT_N, DEFAULT_TRIALS,
};
pub use experiment::{
    info_pairs, read_rows_csv, run_experiment, run_experiment_with, run_trials, run_trials_with, sift_accuracy,
    summary_path, trial_seed, worker_count, write_json, write_rows, ExperimentResult, Summary, WORKERS_ENV,
};
pub use sweep::{run_sweep, write_sweep, SweepRow};
pub use verify::{all_satisfied, bernoulli_tails, exhaustive_weight_mi, run_verify, Scope};
