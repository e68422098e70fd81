use crate::hydro::{farm_power, EvaluationResult, HydroError, HydroModel};
use crate::scenario::WaveScenario;

use super::{distance_penalty_with, FarmBounds, FarmLayout, PenaltyMode};

/// Outcome of scoring one layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    /// Value every optimizer maximizes (W); `-∞` when the model failed.
    pub fitness: f64,
    pub sum_violation: f64,
    pub penalty: f64,
    pub outcome: Result<EvaluationResult, HydroError>,
}

/// Something an [`Evaluator`](super::Evaluator) can score. Implementations
/// must be pure: the same layout always yields the same `Scored`.
pub trait Objective: Send + Sync {
    fn score(&self, layout: &FarmLayout) -> Scored;
}

/// Farm power minus the distance penalty.
#[derive(Debug, Clone)]
pub struct FarmObjective {
    pub model: HydroModel,
    pub scenario: WaveScenario,
    pub bounds: FarmBounds,
    pub penalty_mode: PenaltyMode,
}

impl FarmObjective {
    pub fn new(model: HydroModel, scenario: WaveScenario, bounds: FarmBounds) -> Self {
        Self {
            model,
            scenario,
            bounds,
            penalty_mode: PenaltyMode::default(),
        }
    }
}

impl Objective for FarmObjective {
    fn score(&self, layout: &FarmLayout) -> Scored {
        let pen = distance_penalty_with(layout.positions(), &self.bounds, self.penalty_mode);
        let outcome = farm_power(&self.model, &self.scenario, layout);
        let fitness = match &outcome {
            Ok(r) => r.total_power - pen.penalty,
            Err(_) => f64::NEG_INFINITY,
        };
        Scored {
            fitness,
            sum_violation: pen.sum_violation,
            penalty: pen.penalty,
            outcome,
        }
    }
}
