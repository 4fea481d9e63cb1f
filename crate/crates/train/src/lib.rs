//! Training harness on top of `nesy-core`: a small MLP, synthetic structured
//! prediction tasks, constrained supervised training and a constrained GAN.

pub mod can;
pub mod data;
pub mod mlp;
pub mod supervised;

use nesy_core::{CircuitError, CompileError, ConstraintError, QueryError};

#[derive(Debug, thiserror::Error)]
pub enum TrainError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

pub use can::{sample_and_score, train_can, CanConfig, CanReport, Generator, Score};
pub use data::{
    gen_grid_dataset, gen_preference_dataset, grid_task, preference_task, Dataset, PreferenceSpec,
    Task,
};
pub use mlp::{Adam, Mlp};
pub use supervised::{
    evaluate_metrics, train_supervised, EntropyMode, Metrics, TrainConfig, TrainReport,
};
