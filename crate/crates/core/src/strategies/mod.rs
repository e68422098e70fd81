//! Decomposed searches: alternating position/PTO phases and sequential
//! one-buoy-at-a-time placement with optional backtracking.
//!
//! Placement methods only ever evaluate feasible layouts. Their position
//! moves go through [`repair`], so the distance penalty never applies.

mod alternating;
mod placement;

pub use alternating::{run_alternating, run_dual_de, AlternatingConfig, PhaseMethod};
pub use placement::{
    backtrack, run_ls_nm, run_sls_nm, worst_buoys, BacktrackVariant, FirstBuoy, LsConfig, SlsConfig,
};

use crate::farm::{fits, Evaluation, Evaluator, FarmBounds, FarmLayout, Position, Pto};
use crate::optimizers::NelderMead;

/// Attempts made by [`repair`] before giving up.
const REPAIR_ROUNDS: usize = 32;
/// Relative slack added when pushing a buoy out to the safety distance, so
/// rounding never leaves it a hair short.
const PUSH_SLACK: f64 = 1e-9;

/// Layout the search currently stands on, with its measured fitness and
/// per-buoy powers.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Incumbent {
    pub layout: FarmLayout,
    pub fitness: f64,
    pub per_buoy: Vec<f64>,
}

impl Incumbent {
    pub fn new(layout: FarmLayout) -> Self {
        Self {
            per_buoy: vec![f64::NEG_INFINITY; layout.len()],
            layout,
            fitness: f64::NEG_INFINITY,
        }
    }

    pub fn adopt(&mut self, layout: FarmLayout, e: &Evaluation) {
        self.per_buoy = e
            .result()
            .map_or_else(|| vec![f64::NEG_INFINITY; layout.len()], |r| r.per_buoy_power.clone());
        self.layout = layout;
        self.fitness = e.fitness;
    }
}

/// Which coordinates of one buoy a burst moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Block {
    Pto(usize),
    Position(usize),
    /// Position and PTO together.
    Joint(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BurstOutcome {
    /// Fitness of the incumbent as re-measured by the burst's first call.
    pub start: f64,
    pub best: f64,
    pub improved: bool,
    pub evaluations: usize,
    pub exhausted: bool,
}

impl BurstOutcome {
    pub fn rate(&self) -> f64 {
        crate::optimizers::improvement_rate(self.best, self.start)
    }
}

fn unit(v: f64, (lo, hi): (f64, f64)) -> f64 {
    (v - lo) / (hi - lo)
}

fn scale(u: f64, (lo, hi): (f64, f64)) -> f64 {
    lo + u * (hi - lo)
}

/// Runs a Nelder-Mead burst of `max_evals` calls over one buoy's block,
/// everything else frozen. The incumbent is replaced only by a strictly
/// better layout.
pub(crate) fn burst(
    ev: &Evaluator<'_>,
    nm: &NelderMead,
    inc: &mut Incumbent,
    block: Block,
    max_evals: usize,
) -> BurstOutcome {
    let b = *ev.bounds();
    let base = inc.layout.clone();
    let (i, moves_pos, moves_pto) = match block {
        Block::Pto(i) => (i, false, true),
        Block::Position(i) => (i, true, false),
        Block::Joint(i) => (i, true, true),
    };
    let others: Vec<Position> = (0..base.len()).filter(|&j| j != i).map(|j| base.position(j)).collect();
    let box_range = (0.0, b.size);

    let mut start = Vec::with_capacity(4);
    if moves_pos {
        let p = base.position(i);
        start.extend([unit(p.x, box_range), unit(p.y, box_range)]);
    }
    if moves_pto {
        let t = base.pto(i);
        start.extend([unit(t.k, b.spring), unit(t.d, b.damper)]);
    }

    let decode = |u: &[f64]| -> FarmLayout {
        let mut l = base.clone();
        let mut rest = u;
        if moves_pos {
            let p = Position::new(scale(rest[0], box_range), scale(rest[1], box_range));
            let p = repair(p, &others, &b).unwrap_or(base.position(i));
            l.set_position(i, p).expect("finite position");
            rest = &rest[2..];
        }
        if moves_pto {
            let t = Pto::new(scale(rest[0], b.spring), scale(rest[1], b.damper));
            l.set_pto(i, t, &b).expect("finite PTO");
        }
        l
    };

    let mut best: Option<(FarmLayout, Evaluation)> = None;
    let out = nm.maximize(&start, max_evals, |u| {
        let l = decode(u);
        let e = ev.evaluate(&l).ok()?;
        let f = e.fitness;
        if best.as_ref().is_none_or(|(_, b)| f > b.fitness) {
            best = Some((l, e));
        }
        Some(f)
    });
    let mut improved = false;
    if let Some((l, e)) = best {
        if e.fitness > inc.fitness {
            inc.adopt(l, &e);
            improved = true;
        }
    }
    BurstOutcome {
        start: out.start_value,
        best: out.best_value,
        improved,
        evaluations: out.evaluations,
        exhausted: out.exhausted,
    }
}

/// Nearest-ish feasible spot for a buoy at `p` given the fixed `others`:
/// clamps into the farm square and pushes out of every neighbour's safety
/// circle, repeating until nothing is violated. `None` if that does not
/// settle.
pub fn repair(p: Position, others: &[Position], bounds: &FarmBounds) -> Option<Position> {
    let clamp = |p: Position| Position::new(p.x.clamp(0.0, bounds.size), p.y.clamp(0.0, bounds.size));
    let mut q = clamp(p);
    for _ in 0..REPAIR_ROUNDS {
        if fits(&q, others, bounds) {
            return Some(q);
        }
        for o in others {
            let d = q.distance(o);
            if d < bounds.safety {
                let (ux, uy) = if d > 0.0 {
                    ((q.x - o.x) / d, (q.y - o.y) / d)
                } else {
                    (1.0, 0.0)
                };
                let r = bounds.safety * (1.0 + PUSH_SLACK);
                q = Position::new(o.x + ux * r, o.y + uy * r);
            }
        }
        q = clamp(q);
    }
    fits(&q, others, bounds).then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farm::{Budget, FarmObjective, DEFAULT_PTO};
    use crate::hydro::HydroModel;
    use crate::scenario::bundled;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn repaired_positions_fit(
            x in -100.0f64..400.0,
            y in -100.0f64..400.0,
            others in proptest::collection::vec((0.0f64..283.0, 0.0f64..283.0), 0..3),
        ) {
            let b = FarmBounds::for_buoys(4);
            let others: Vec<Position> = others.into_iter().map(|(x, y)| Position::new(x, y)).collect();
            if let Some(q) = repair(Position::new(x, y), &others, &b) {
                prop_assert!(fits(&q, &others, &b));
            }
        }
    }

    #[test]
    fn repair_leaves_feasible_points_alone() {
        let b = FarmBounds::for_buoys(4);
        let p = Position::new(100.0, 100.0);
        assert_eq!(repair(p, &[Position::new(200.0, 200.0)], &b), Some(p));
    }

    #[test]
    fn repair_pushes_out_to_safety_distance() {
        let b = FarmBounds::for_buoys(4);
        let o = Position::new(100.0, 100.0);
        let q = repair(Position::new(110.0, 100.0), &[o], &b).unwrap();
        assert!((q.distance(&o) - 50.0).abs() < 1e-6);
        assert!((q.y - 100.0).abs() < 1e-12);
    }

    #[test]
    fn burst_only_adopts_improvements() {
        let obj = FarmObjective::new(HydroModel::default(), bundled::monochromatic(), FarmBounds::for_buoys(2));
        let ev = Evaluator::new(&obj, obj.bounds, Budget::evaluations(200));
        let l = FarmLayout::new(
            vec![Position::new(50.0, 50.0), Position::new(150.0, 60.0)],
            vec![DEFAULT_PTO; 2],
            &obj.bounds,
        )
        .unwrap();
        let mut inc = Incumbent::new(l);
        let first = burst(&ev, &NelderMead::default(), &mut inc, Block::Joint(1), 40);
        assert_eq!(first.evaluations, 40);
        assert!(first.improved && inc.fitness == first.best);
        let before = inc.clone();
        let again = burst(&ev, &NelderMead::default(), &mut inc, Block::Pto(0), 25);
        if !again.improved {
            assert_eq!(inc, before);
        }
        assert!(inc.fitness >= before.fitness);
        assert!(crate::farm::is_feasible(inc.layout.positions(), &obj.bounds));
    }
}
