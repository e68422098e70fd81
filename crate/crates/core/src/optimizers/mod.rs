//! All-at-once baselines over the full `4n`-dimensional decision vector.
//!
//! Every method works in unit-cube coordinates: the flat vector
//! `[x1, y1, …, xn, yn, k1, d1, …, kn, dn]` is scaled by its bounds so each
//! coordinate spans `[0, 1]`. PTO coordinates are clamped when decoded;
//! positions are left free and infeasibility is paid through the penalty.

mod cmaes;
mod de;
mod nelder_mead;
mod nm_mutation;
mod one_plus_one;
mod pso;
pub mod surrogates;

pub use cmaes::{run_cma_es, CmaEs};
pub use de::{de_trials, run_de};
pub use nelder_mead::{NelderMead, NmOutcome};
pub use nm_mutation::run_nm_mutation;
pub use one_plus_one::{mutate, run_one_plus_one};
pub use pso::run_pso;

use std::ops::Range;

use rand::Rng;

use crate::farm::{
    random_feasible_layout, uniform_position, uniform_pto, BudgetExhausted, Evaluator, FarmBounds,
    FarmLayout, Position, Pto, TracePoint,
};
use crate::hydro::EvaluationResult;

/// Differential evolution: rand/1/bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeParams {
    pub weight: f64,
    pub crossover: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoParams {
    pub cognitive: f64,
    pub social: f64,
    pub inertia_start: f64,
    pub inertia_end: f64,
    /// Largest velocity component, in unit-cube units.
    pub velocity_clamp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EaParams {
    /// Gaussian step in unit-cube units (fraction of each coordinate's range).
    pub sigma: f64,
    /// Mutate whole buoys with probability 1/n instead of single
    /// coordinates with probability 1/(4n).
    pub per_buoy_mutation: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmMutationParams {
    /// Evaluations per Nelder-Mead pass.
    pub max_evals: usize,
    /// Whole-vector mutation step, unit-cube units.
    pub sigma: f64,
}

/// Settings shared by every method. Default population sizes depend
/// on the buoy count; see [`OptimizerConfig::for_buoys`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub seed: u64,
    /// CMA-ES population size λ.
    pub cma_population: usize,
    /// CMA-ES initial step size, unit-cube units.
    pub cma_sigma: f64,
    /// DE and PSO population size.
    pub population: usize,
    pub de: DeParams,
    pub pso: PsoParams,
    pub ea: EaParams,
    pub nelder_mead: NelderMead,
    pub nm_mutation: NmMutationParams,
}

impl OptimizerConfig {
    pub fn for_buoys(n: usize, seed: u64) -> Self {
        let small = n <= 4;
        Self {
            seed,
            cma_population: if small { 12 } else { 16 },
            cma_sigma: 0.3,
            population: if small { 50 } else { 30 },
            de: DeParams {
                weight: 0.5,
                crossover: 0.5,
            },
            pso: PsoParams {
                cognitive: 1.5,
                social: 2.0,
                inertia_start: 1.0,
                inertia_end: 0.4,
                velocity_clamp: 0.2,
            },
            ea: EaParams {
                sigma: 0.1,
                per_buoy_mutation: false,
            },
            nelder_mead: NelderMead::default(),
            nm_mutation: NmMutationParams {
                max_evals: 500,
                sigma: 0.1,
            },
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.cma_population < 2 || self.population < 4 {
            return Err("population sizes must be at least 2 (CMA-ES) and 4 (DE/PSO)".into());
        }
        let rates = [
            ("de.weight", self.de.weight),
            ("de.crossover", self.de.crossover),
            ("ea.sigma", self.ea.sigma),
            ("nm_mutation.sigma", self.nm_mutation.sigma),
            ("cma.sigma", self.cma_sigma),
        ];
        for (name, v) in rates {
            if !(v > 0.0 && v <= 1.0) {
                return Err(format!("{name} must lie in (0, 1], got {v}"));
            }
        }
        Ok(())
    }
}

/// Maps layouts to unit-cube vectors and back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Codec {
    pub bounds: FarmBounds,
    pub n: usize,
}

impl Codec {
    pub fn new(bounds: FarmBounds) -> Self {
        Self { n: bounds.n, bounds }
    }

    pub fn dims(&self) -> usize {
        4 * self.n
    }

    pub fn positions(&self) -> Range<usize> {
        0..2 * self.n
    }

    pub fn ptos(&self) -> Range<usize> {
        2 * self.n..4 * self.n
    }

    pub fn is_pto(&self, i: usize) -> bool {
        i >= 2 * self.n
    }

    pub fn encode(&self, layout: &FarmLayout) -> Vec<f64> {
        assert_eq!(layout.len(), self.n);
        let n = self.n;
        let mut v = Vec::with_capacity(4 * n);
        for p in layout.positions() {
            v.push(p.x);
            v.push(p.y);
        }
        for t in layout.ptos() {
            v.push(t.k);
            v.push(t.d);
        }
        v.iter()
            .enumerate()
            .map(|(i, &x)| {
                let (lo, hi) = self.bounds.coordinate_range(i, n);
                (x - lo) / (hi - lo)
            })
            .collect()
    }

    fn scale(&self, i: usize, u: f64) -> f64 {
        let (lo, hi) = self.bounds.coordinate_range(i, self.n);
        let u = if u.is_finite() { u } else { 0.5 };
        lo + u * (hi - lo)
    }

    /// Inverse of [`Codec::encode`]; PTO values are clamped into bounds.
    pub fn decode(&self, u: &[f64]) -> FarmLayout {
        assert_eq!(u.len(), 4 * self.n);
        let n = self.n;
        let positions = (0..n)
            .map(|i| Position::new(self.scale(2 * i, u[2 * i]), self.scale(2 * i + 1, u[2 * i + 1])))
            .collect();
        let ptos = (0..n)
            .map(|i| {
                let j = 2 * n + 2 * i;
                Pto::new(self.scale(j, u[j]), self.scale(j + 1, u[j + 1]))
            })
            .collect();
        FarmLayout::new(positions, ptos, &self.bounds).expect("decoded values are finite")
    }

    /// Clamps PTO coordinates of a unit vector into `[0, 1]`.
    pub fn clamp_ptos(&self, u: &mut [f64]) {
        for v in &mut u[self.ptos()] {
            *v = v.clamp(0.0, 1.0);
        }
    }
}

/// Method-specific counters recorded alongside a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    /// NM+Mutation: number of mutation draws.
    pub mutation_draws: u64,
    /// Alternating methods: completed position/PTO phase pairs.
    pub phases: u64,
    /// Dual-DE: complement exchanges.
    pub exchanges: u64,
    /// Sequential placement: position samples evaluated for each buoy
    /// after the first.
    pub placement_samples: Vec<usize>,
    /// Sequential placement: evaluations spent before backtracking started.
    pub placement_evaluations: u64,
    /// Backtracking passes started.
    pub backtrack_passes: u64,
}

/// Outcome of one seeded optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub method: String,
    pub seed: u64,
    /// Best complete layout seen; `None` for an empty run.
    pub best_layout: Option<FarmLayout>,
    /// `-∞` for an empty run.
    pub best_fitness: f64,
    pub best_result: Option<EvaluationResult>,
    pub trace: Vec<TracePoint>,
    pub evaluations: u64,
    pub wall_seconds: f64,
    pub stats: RunStats,
}

impl RunRecord {
    pub fn from_evaluator(method: &str, seed: u64, ev: &Evaluator<'_>, stats: RunStats) -> Self {
        let best = ev.best();
        Self {
            method: method.to_string(),
            seed,
            best_fitness: best.as_ref().map_or(f64::NEG_INFINITY, |b| b.fitness),
            best_result: best.as_ref().and_then(|b| b.result.clone()),
            best_layout: best.map(|b| b.layout),
            trace: ev.trace(),
            evaluations: ev.count(),
            wall_seconds: ev.elapsed_seconds(),
            stats,
        }
    }
}

/// Relative improvement of `new` over `old`, floored at zero. Any finite
/// value improves on `-∞`.
pub fn improvement_rate(new: f64, old: f64) -> f64 {
    if !(new > old) {
        0.0
    } else if !old.is_finite() || old == 0.0 {
        1.0
    } else {
        (new - old) / old.abs()
    }
}

/// Random feasible layout; uniform positions if the farm is too crowded
/// for rejection sampling to find one.
pub fn start_layout<R: Rng + ?Sized>(bounds: &FarmBounds, rng: &mut R) -> FarmLayout {
    random_feasible_layout(bounds, rng).unwrap_or_else(|_| {
        let positions = (0..bounds.n).map(|_| uniform_position(bounds, rng)).collect();
        let ptos = (0..bounds.n).map(|_| uniform_pto(bounds, rng)).collect();
        FarmLayout::new(positions, ptos, bounds).expect("sampled values are finite")
    })
}

/// Scores unit vectors through `codec`, mapping budget exhaustion to `None`.
pub(crate) fn score(ev: &Evaluator<'_>, codec: &Codec, u: &[f64]) -> Option<f64> {
    ev.evaluate(&codec.decode(u)).ok().map(|e| e.fitness)
}

/// Scores a batch; returns `None` if any member hit the budget.
pub(crate) fn score_batch(ev: &Evaluator<'_>, codec: &Codec, us: &[Vec<f64>]) -> Option<Vec<f64>> {
    let layouts: Vec<FarmLayout> = us.iter().map(|u| codec.decode(u)).collect();
    ev.evaluate_batch(&layouts)
        .into_iter()
        .map(|r| r.map(|e| e.fitness))
        .collect::<Result<Vec<_>, BudgetExhausted>>()
        .ok()
}
