//! Decision-vector handling: bounds, the inter-buoy distance penalty,
//! feasibility sampling and the budget-accounted fitness function.

mod evaluator;
mod layout;
mod objective;

pub use evaluator::{BestRecord, Budget, BudgetExhausted, Evaluation, Evaluator, TracePoint};
pub use layout::{
    clamp_pto, FarmBounds, FarmLayout, LayoutError, Position, Pto, AREA_PER_BUOY, DAMPER_BOUNDS,
    DEFAULT_PTO, SAFETY_DISTANCE, SPRING_BOUNDS,
};
pub use objective::{FarmObjective, Objective, Scored};

use rand::Rng;
use thiserror::Error;

/// Exponent of the distance penalty `(violation + 1)^20`.
pub const PENALTY_EXPONENT: i32 = 20;

const MAX_REJECTIONS_PER_BUOY: usize = 10_000;
const MAX_RESTARTS: usize = 100;

/// How the distance penalty is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PenaltyMode {
    /// Violations are positive magnitudes and a feasible layout carries
    /// exactly zero penalty: `(v + 1)^20 − 1`.
    #[default]
    Corrected,
    /// `Σ (dist − safety)` over close pairs (negative terms) and `(Σ + 1)^20`
    /// without offset, so feasible layouts pay 1 W.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyBreakdown {
    /// Total violation in metres (pair shortfalls plus out-of-box distance).
    pub sum_violation: f64,
    /// Watts subtracted from the farm power.
    pub penalty: f64,
}

/// Distance and boundary penalty of a set of buoy positions.
pub fn distance_penalty(positions: &[Position], bounds: &FarmBounds) -> PenaltyBreakdown {
    distance_penalty_with(positions, bounds, PenaltyMode::Corrected)
}

pub fn distance_penalty_with(
    positions: &[Position],
    bounds: &FarmBounds,
    mode: PenaltyMode,
) -> PenaltyBreakdown {
    let mut sum = 0.0;
    for (i, a) in positions.iter().enumerate() {
        for b in &positions[i + 1..] {
            let d = a.distance(b);
            if d < bounds.safety {
                sum += bounds.safety - d;
            }
        }
    }
    for p in positions {
        sum += bounds.shortfall(p);
    }
    match mode {
        PenaltyMode::Corrected => PenaltyBreakdown {
            sum_violation: sum,
            penalty: (sum + 1.0).powi(PENALTY_EXPONENT) - 1.0,
        },
        PenaltyMode::Literal => PenaltyBreakdown {
            sum_violation: -sum,
            penalty: (1.0 - sum).powi(PENALTY_EXPONENT),
        },
    }
}

/// In the box and at least the safety distance from every other buoy.
pub fn is_feasible(positions: &[Position], bounds: &FarmBounds) -> bool {
    positions.iter().enumerate().all(|(i, p)| {
        bounds.contains(p) && positions[i + 1..].iter().all(|q| p.distance(q) >= bounds.safety)
    })
}

/// Whether `candidate` can join `placed` without violating any constraint.
pub fn fits(candidate: &Position, placed: &[Position], bounds: &FarmBounds) -> bool {
    bounds.contains(candidate) && placed.iter().all(|q| candidate.distance(q) >= bounds.safety)
}

#[derive(Debug, Error)]
#[error("could not place {n} buoys at {safety} m spacing in a {size} m square after {restarts} restarts")]
pub struct PlacementError {
    pub n: usize,
    pub safety: f64,
    pub size: f64,
    pub restarts: usize,
}

pub fn uniform_position<R: Rng + ?Sized>(bounds: &FarmBounds, rng: &mut R) -> Position {
    Position::new(
        rng.random_range(0.0..=bounds.size),
        rng.random_range(0.0..=bounds.size),
    )
}

pub fn uniform_pto<R: Rng + ?Sized>(bounds: &FarmBounds, rng: &mut R) -> Pto {
    Pto::new(
        rng.random_range(bounds.spring.0..=bounds.spring.1),
        rng.random_range(bounds.damper.0..=bounds.damper.1),
    )
}

/// Uniform position that fits next to `placed`, by rejection sampling.
pub fn uniform_fitting_position<R: Rng + ?Sized>(
    placed: &[Position],
    bounds: &FarmBounds,
    rng: &mut R,
) -> Option<Position> {
    (0..MAX_REJECTIONS_PER_BUOY)
        .map(|_| uniform_position(bounds, rng))
        .find(|p| fits(p, placed, bounds))
}

/// Uniformly sampled feasible `bounds.n`-buoy layout with uniform PTOs.
pub fn random_feasible_layout<R: Rng + ?Sized>(
    bounds: &FarmBounds,
    rng: &mut R,
) -> Result<FarmLayout, PlacementError> {
    'restart: for _ in 0..MAX_RESTARTS {
        let mut positions = Vec::with_capacity(bounds.n);
        for _ in 0..bounds.n {
            match uniform_fitting_position(&positions, bounds, rng) {
                Some(p) => positions.push(p),
                None => continue 'restart,
            }
        }
        let ptos = (0..bounds.n).map(|_| uniform_pto(bounds, rng)).collect();
        return Ok(FarmLayout::new(positions, ptos, bounds).expect("sampled values are finite"));
    }
    Err(PlacementError {
        n: bounds.n,
        safety: bounds.safety,
        size: bounds.size,
        restarts: MAX_RESTARTS,
    })
}
