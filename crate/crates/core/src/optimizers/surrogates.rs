//! Cheap analytic objectives with known optima, used to check optimizer
//! convergence without the hydrodynamic model.
//!
//! All of them score the layout's unit-cube encoding, so the optimum is
//! stated in the same coordinates the optimizers search.

use crate::farm::{FarmBounds, FarmLayout, Objective, Scored};
use crate::hydro::{EvaluationResult, HydroError};

use super::Codec;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `−Σ (u − c)²`.
    Sphere,
    /// `−max(0, Σ (u − c)² − r²)`: flat top of radius `r` around `c`.
    Plateau(f64),
    /// `−Σ_pos (u − c)² − 4·Σ_pto (u − c)²`, separable between the
    /// position and PTO blocks with different curvature.
    Separable,
    /// Constant zero.
    Flat,
}

/// Surrogate objective over the unit-cube encoding of a layout.
///
/// Layouts with fewer than `n` buoys (partial placements) are scored on
/// the buoys present.
#[derive(Debug, Clone)]
pub struct Surrogate {
    pub shape: Shape,
    pub bounds: FarmBounds,
    /// Optimum in unit-cube coordinates, `4n` entries.
    pub center: Vec<f64>,
}

impl Surrogate {
    pub fn new(shape: Shape, bounds: FarmBounds, center: Vec<f64>) -> Self {
        assert_eq!(center.len(), 4 * bounds.n);
        Self {
            shape,
            bounds,
            center,
        }
    }

    /// Optimum at a fixed, irregular interior point.
    pub fn with_default_center(shape: Shape, bounds: FarmBounds) -> Self {
        let center = (0..4 * bounds.n)
            .map(|i| 0.2 + 0.6 * ((i as f64 * 0.618_034).fract()))
            .collect();
        Self::new(shape, bounds, center)
    }

    /// Value at the optimum.
    pub fn optimum(&self) -> f64 {
        0.0
    }

    pub fn value(&self, layout: &FarmLayout) -> f64 {
        let n = self.bounds.n;
        let m = layout.len();
        let u = if m == n {
            Codec::new(self.bounds).encode(layout)
        } else {
            let mut sub = self.bounds;
            sub.n = m;
            Codec::new(sub).encode(layout)
        };
        // Map the partial encoding back onto the full index set.
        let index = |i: usize| if i < 2 * m { i } else { 2 * n + (i - 2 * m) };
        let sq = |i: usize| (u[i] - self.center[index(i)]).powi(2);
        match self.shape {
            Shape::Sphere => -(0..u.len()).map(sq).sum::<f64>(),
            Shape::Plateau(r) => -((0..u.len()).map(sq).sum::<f64>() - r * r).max(0.0),
            Shape::Separable => {
                let pos: f64 = (0..2 * m).map(sq).sum();
                let pto: f64 = (2 * m..4 * m).map(sq).sum();
                -pos - 4.0 * pto
            }
            Shape::Flat => 0.0,
        }
    }
}

impl Objective for Surrogate {
    fn score(&self, layout: &FarmLayout) -> Scored {
        let fitness = self.value(layout);
        let outcome: Result<EvaluationResult, HydroError> = Ok(EvaluationResult {
            total_power: fitness,
            per_buoy_power: vec![fitness / layout.len().max(1) as f64; layout.len()],
            isolated_power: vec![0.0; layout.len()],
            q_factor: f64::NAN,
            cells: None,
        });
        Scored {
            fitness,
            sum_violation: 0.0,
            penalty: 0.0,
            outcome,
        }
    }
}
