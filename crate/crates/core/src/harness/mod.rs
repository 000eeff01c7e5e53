//! Experiment plumbing: configs, generators, Monte Carlo runs, bound tables.

mod bounds;
mod config;
mod experiment;
mod generate;

pub use bounds::{bound_table, write_bound_csv, BoundKind, BoundRow};
pub use config::{AlgorithmSpec, ArrivalPolicy, ExperimentConfig, InstanceSource, KeyValues};
pub use experiment::{
    derive_seed, load_instance, run_experiment, run_experiment_on, Estimate, ExperimentResult, Summary, TrialRecord,
    SEED_GAMMA,
};
pub use generate::{generate, GeneratorKind, GeneratorSpec, SigmaChoice};
