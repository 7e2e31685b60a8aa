//! Scenarios, plan progress, the end-to-end pipeline, random instances and
//! the allocator benchmark.

mod bench;
mod generate;
mod pipeline;
mod progress;
mod scenario;

use std::path::PathBuf;

use thiserror::Error;

use crate::ltl::ParseError;
use crate::models::ModelError;
use crate::synthesis::SynthesisError;

pub use bench::{aggregate, bench, write_csv, write_gnuplot, AggregateRow, BenchRow};
pub use generate::{generate_random, trial_seed, BenchConfig, SEED_ENV};
pub use pipeline::{run_pipeline, PipelineOptions};
pub use progress::{advance_along, advance_progress, Progress};
pub use scenario::{
    load_scenario, parse_scenario, save_scenario, CapabilitySpec, EdgeSpec, EnvironmentSpec,
    RobotSpec, Scenario, ScenarioSpec, StateSpecJson, MOTION,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid JSON at `{pointer}`: {message}")]
    Json { pointer: String, message: String },
    #[error("{context}: {source}")]
    Model { context: String, source: ModelError },
    #[error("{location}: {source}")]
    Ltl { location: String, source: ParseError },
    #[error("robot `{robot}`: unknown capability `{name}`")]
    UnknownCapability { robot: String, name: String },
    #[error("robot `{robot}`: {message}")]
    InitialState { robot: String, message: String },
    #[error("duplicate robot id `{0}`")]
    DuplicateRobot(String),
    #[error("unknown robot `{0}`")]
    UnknownRobot(String),
    #[error("capability name `{0}` is reserved or duplicated")]
    BadCapabilityName(String),
    #[error("the new sub-tasks cannot be satisfied together")]
    ConflictingTasks,
    #[error("robot `{0}`: current task cannot be satisfied from the initial state")]
    UnsatisfiableCurrentTask(String),
    #[error("new task index {index} out of range 1..={m}")]
    TaskIndex { index: usize, m: usize },
    #[error("bench config: {0}")]
    Config(String),
    #[error("no valid scenario after {attempts} draws; last rejection: {last}")]
    RetriesExhausted { attempts: usize, last: String },
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error("{0}")]
    Internal(String),
}

impl HarnessError {
    /// Process exit code: 1 for invalid input, 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Synthesis(_) | HarnessError::Internal(_) | HarnessError::Io { .. } => 3,
            _ => 1,
        }
    }
}
