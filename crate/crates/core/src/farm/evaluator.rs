use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::hydro::{EvaluationResult, HydroError};

use super::{FarmBounds, FarmLayout, Objective};

/// The evaluation budget is spent (or the run was interrupted). Optimizers
/// treat this as a normal stop condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("evaluation budget exhausted")]
pub struct BudgetExhausted;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub max_evaluations: u64,
    pub wall_seconds: Option<f64>,
}

impl Budget {
    pub fn evaluations(max_evaluations: u64) -> Self {
        Self {
            max_evaluations,
            wall_seconds: None,
        }
    }
}

/// One counted fitness call.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// 1-based position in the run's evaluation sequence.
    pub index: u64,
    pub fitness: f64,
    pub sum_violation: f64,
    pub penalty: f64,
    pub outcome: Result<EvaluationResult, HydroError>,
}

impl Evaluation {
    pub fn result(&self) -> Option<&EvaluationResult> {
        self.outcome.as_ref().ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestRecord {
    pub fitness: f64,
    pub layout: FarmLayout,
    pub result: Option<EvaluationResult>,
    pub index: u64,
    /// Seconds since the evaluator was created.
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub index: u64,
    /// Fitness returned by this call.
    pub fitness: f64,
    /// Best fitness over complete layouts up to and including this call.
    pub best: f64,
}

#[derive(Debug, Default)]
struct State {
    reserved: u64,
    /// Indexed by evaluation index − 1; `None` until committed.
    slots: Vec<Option<(f64, bool)>>,
    best: Option<BestRecord>,
}

/// Budget-accounted fitness function shared by every optimizer.
///
/// Counts every call (penalized and failed ones included), keeps the best
/// complete layout seen so far and an ordered trace. Safe to call from
/// several threads; the best record is chosen by (fitness, lowest index)
/// so commit order never matters.
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    bounds: FarmBounds,
    budget: Budget,
    stop: Option<Arc<AtomicBool>>,
    started: Instant,
    state: Mutex<State>,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a dyn Objective, bounds: FarmBounds, budget: Budget) -> Self {
        Self {
            objective,
            bounds,
            budget,
            stop: None,
            started: Instant::now(),
            state: Mutex::new(State::default()),
        }
    }

    /// Calls made after `flag` is raised report [`BudgetExhausted`].
    pub fn with_stop_flag(mut self, flag: Arc<AtomicBool>) -> Self {
        self.stop = Some(flag);
        self
    }

    pub fn bounds(&self) -> &FarmBounds {
        &self.bounds
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// Evaluations made so far.
    pub fn count(&self) -> u64 {
        self.state.lock().unwrap().reserved
    }

    pub fn remaining(&self) -> u64 {
        self.budget.max_evaluations.saturating_sub(self.count())
    }

    pub fn elapsed_seconds(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    fn reserve(&self, want: usize) -> (u64, usize) {
        let mut st = self.state.lock().unwrap();
        let halted = self.stop.as_ref().is_some_and(|f| f.load(Ordering::Relaxed))
            || self
                .budget
                .wall_seconds
                .is_some_and(|w| self.started.elapsed().as_secs_f64() >= w);
        let left = if halted {
            0
        } else {
            self.budget.max_evaluations.saturating_sub(st.reserved)
        };
        let granted = (want as u64).min(left) as usize;
        let first = st.reserved + 1;
        st.reserved += granted as u64;
        let len = st.reserved as usize;
        st.slots.resize(len, None);
        (first, granted)
    }

    fn commit(&self, index: u64, layout: &FarmLayout, eval: &Evaluation) {
        let complete = layout.len() == self.bounds.n;
        let seconds = self.elapsed_seconds();
        let mut st = self.state.lock().unwrap();
        st.slots[(index - 1) as usize] = Some((eval.fitness, complete));
        if !complete {
            return;
        }
        let better = match &st.best {
            None => true,
            Some(b) => eval.fitness > b.fitness || (eval.fitness == b.fitness && index < b.index),
        };
        if better {
            st.best = Some(BestRecord {
                fitness: eval.fitness,
                layout: layout.clone(),
                result: eval.outcome.as_ref().ok().cloned(),
                index,
                seconds,
            });
        }
    }

    fn run(&self, index: u64, layout: &FarmLayout) -> Evaluation {
        let s = self.objective.score(layout);
        Evaluation {
            index,
            fitness: s.fitness,
            sum_violation: s.sum_violation,
            penalty: s.penalty,
            outcome: s.outcome,
        }
    }

    /// Scores one layout, or reports that the budget is spent without
    /// counting anything.
    pub fn evaluate(&self, layout: &FarmLayout) -> Result<Evaluation, BudgetExhausted> {
        let (index, granted) = self.reserve(1);
        if granted == 0 {
            return Err(BudgetExhausted);
        }
        let e = self.run(index, layout);
        self.commit(index, layout, &e);
        Ok(e)
    }

    /// Scores a batch concurrently. Indices follow batch order; entries past
    /// the remaining budget come back as [`BudgetExhausted`].
    pub fn evaluate_batch(&self, layouts: &[FarmLayout]) -> Vec<Result<Evaluation, BudgetExhausted>> {
        let (first, granted) = self.reserve(layouts.len());
        let evals: Vec<Evaluation> = layouts[..granted]
            .par_iter()
            .enumerate()
            .map(|(i, l)| self.run(first + i as u64, l))
            .collect();
        for (e, l) in evals.iter().zip(layouts) {
            self.commit(e.index, l, e);
        }
        let mut out: Vec<Result<Evaluation, BudgetExhausted>> = evals.into_iter().map(Ok).collect();
        out.resize(layouts.len(), Err(BudgetExhausted));
        out
    }

    pub fn best(&self) -> Option<BestRecord> {
        self.state.lock().unwrap().best.clone()
    }

    pub fn best_fitness(&self) -> f64 {
        self.state
            .lock()
            .unwrap()
            .best
            .as_ref()
            .map_or(f64::NEG_INFINITY, |b| b.fitness)
    }

    /// Ordered trace of every committed call with the running best.
    pub fn trace(&self) -> Vec<TracePoint> {
        let st = self.state.lock().unwrap();
        let mut best = f64::NEG_INFINITY;
        st.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|v| (i, v)))
            .map(|(i, (fitness, complete))| {
                if complete && fitness > best {
                    best = fitness;
                }
                TracePoint {
                    index: i as u64 + 1,
                    fitness,
                    best,
                }
            })
            .collect()
    }
}
