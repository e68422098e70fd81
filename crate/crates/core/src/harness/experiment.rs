//! Runs the (method, seed) matrix and writes every artifact.

use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::farm::{Evaluator, FarmObjective, LayoutError};
use crate::optimizers::RunRecord;
use crate::scenario::{resolve_scenario, ScenarioError};

use super::config::{ConfigError, ExperimentConfig};
use super::output;
use super::registry::run_method;
use super::stats::{summarize, SummaryTable};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("scenario `{name}`: {source}")]
    Scenario { name: String, source: ScenarioError },
    #[error("layout: {0}")]
    Layout(#[from] LayoutError),
    #[error("writing {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("thread pool: {0}")]
    Pool(String),
}

fn write_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> HarnessError {
    let path = path.into();
    move |source| HarnessError::Write { path, source }
}

/// Farm objective described by `cfg`.
pub fn build_objective(cfg: &ExperimentConfig) -> Result<FarmObjective, HarnessError> {
    let scenario = resolve_scenario(&cfg.scenario).map_err(|source| HarnessError::Scenario {
        name: cfg.scenario.clone(),
        source,
    })?;
    let mut obj = FarmObjective::new(cfg.hydro, scenario, cfg.bounds());
    obj.penalty_mode = cfg.penalty;
    Ok(obj)
}

/// One seeded run of `method`, stopping early once `stop` is raised.
pub fn run_one(
    objective: &FarmObjective,
    cfg: &ExperimentConfig,
    method: &str,
    seed: u64,
    stop: Arc<AtomicBool>,
) -> Result<RunRecord, HarnessError> {
    let ev = Evaluator::new(objective, objective.bounds, cfg.budget()).with_stop_flag(stop);
    Ok(run_method(method, &ev, cfg, seed)?)
}

/// Runs and writes one record, as the `run` subcommand does.
pub fn run_and_write(
    cfg: &ExperimentConfig,
    method: &str,
    seed: u64,
    stop: Arc<AtomicBool>,
) -> Result<(RunRecord, PathBuf), HarnessError> {
    cfg.validate()?;
    let obj = build_objective(cfg)?;
    let r = run_one(&obj, cfg, method, seed, stop)?;
    let stem = output::write_run(&cfg.out, &r, obj.scenario.name(), cfg.budget().max_evaluations)
        .map_err(write_err(&cfg.out))?;
    Ok((r, stem))
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    /// Completed runs, method-major in config order, then by seed.
    pub records: Vec<RunRecord>,
    pub summary: SummaryTable,
    /// The stop flag was raised; tables cover only the finished runs.
    pub interrupted: bool,
}

impl ExperimentOutcome {
    /// Best fitness of every run of `method`, in seed order.
    pub fn fitness_of(&self, method: &str) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.best_fitness)
            .collect()
    }
}

/// Runs every configured method `runs` times on `workers` threads.
///
/// Each run's files are written as soon as it finishes; `summary.csv`,
/// `pvalues.csv` and `convergence.csv` follow once all runs are done.
/// Output is identical for any worker count.
pub fn run_experiment(cfg: &ExperimentConfig, stop: Arc<AtomicBool>) -> Result<ExperimentOutcome, HarnessError> {
    cfg.validate()?;
    let obj = build_objective(cfg)?;
    let budget = cfg.budget().max_evaluations;
    let jobs: Vec<(&str, u64)> = cfg
        .methods
        .iter()
        .flat_map(|m| (0..cfg.runs).map(move |r| (m.as_str(), cfg.run_seed(r))))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;

    let results: Vec<Option<Result<RunRecord, HarnessError>>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(method, seed)| {
                if stop.load(Ordering::Relaxed) {
                    return None;
                }
                let r = run_one(&obj, cfg, method, seed, stop.clone()).and_then(|r| {
                    output::write_run(&cfg.out, &r, obj.scenario.name(), budget)
                        .map_err(write_err(&cfg.out))?;
                    Ok(r)
                });
                Some(r)
            })
            .collect()
    });
    let interrupted = stop.load(Ordering::Relaxed);
    let mut records = Vec::with_capacity(results.len());
    for r in results.into_iter().flatten() {
        records.push(r?);
    }

    let groups: Vec<(String, Vec<&RunRecord>)> = cfg
        .methods
        .iter()
        .map(|m| (m.clone(), records.iter().filter(|r| &r.method == m).collect::<Vec<_>>()))
        .filter(|(_, v)| !v.is_empty())
        .collect();
    let fitness: Vec<(String, Vec<f64>)> = groups
        .iter()
        .map(|(m, v)| (m.clone(), v.iter().map(|r| r.best_fitness).collect()))
        .collect();
    let summary = summarize(&fitness);
    let path = cfg.out.join("summary.csv");
    output::write_summary(&path, &summary).map_err(write_err(&path))?;
    let path = cfg.out.join("pvalues.csv");
    output::write_p_values(&path, &summary).map_err(write_err(&path))?;
    let path = cfg.out.join("convergence.csv");
    output::write_convergence(&path, &groups).map_err(write_err(&path))?;

    Ok(ExperimentOutcome {
        records,
        summary,
        interrupted,
    })
}
