//! Experiment plumbing: configuration, the method registry, run
//! orchestration, statistics, PTO landscapes and file output.

pub mod config;
pub mod experiment;
pub mod landscape;
pub mod output;
pub mod registry;
pub mod stats;

pub use config::{default_budget, ConfigError, ExperimentConfig, Overrides};
pub use experiment::{build_objective, run_and_write, run_experiment, run_one, ExperimentOutcome, HarnessError};
pub use landscape::{axis, landscape, Landscape, LandscapeCell};
pub use registry::{is_registered, run_method, METHODS};
pub use stats::{describe, rank_sum_test, summarize, MethodSummary, RankSum, StatsError, SummaryTable};
