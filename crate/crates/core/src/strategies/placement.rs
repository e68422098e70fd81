use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::farm::{fits, uniform_fitting_position, uniform_position, uniform_pto, Evaluator, FarmLayout, Position, Pto};
use crate::optimizers::{NelderMead, OptimizerConfig, RunRecord, RunStats};

use super::{burst, Block, Incumbent};

/// Local search with Gaussian offsets from the previous buoy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsConfig {
    /// Position samples per buoy, also the PTO burst length.
    pub samples: usize,
    /// Offset standard deviation (m).
    pub sigma: f64,
    /// Redraws allowed per sample before falling back to a uniform
    /// feasible position.
    pub max_rejections: usize,
}

impl LsConfig {
    pub fn with_samples(samples: usize) -> Self {
        Self {
            samples,
            sigma: 70.0,
            max_rejections: 1000,
        }
    }

    pub fn name(&self) -> String {
        format!("ls-nm-{}", self.samples)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstBuoy {
    /// Middle of the bottom edge, `(size/2, 0)`.
    Center,
    /// `(size − safety, safety)`.
    BottomRight,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BacktrackVariant {
    /// PTO burst, then position burst, per revisited buoy.
    B1,
    /// One joint position+PTO burst per revisited buoy.
    B2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlsConfig {
    /// Sample directions (degrees).
    pub angles: Vec<f64>,
    /// Samples fall at `safety + U(0, radius_band)` from the previous buoy (m).
    pub radius_band: f64,
    /// Offset of the two refinement samples around the best direction (degrees).
    pub refinement: f64,
    /// Nelder-Mead burst length for 2-D blocks.
    pub burst: usize,
    /// Relative improvement (0.01 %) that keeps a phase prioritized.
    pub threshold: f64,
    pub first: FirstBuoy,
    /// Share of buoys revisited per backtracking pass.
    pub worst_fraction: f64,
    /// `None` for plain SLS-NM.
    pub backtrack: Option<BacktrackVariant>,
    /// Stop after one backtracking pass instead of looping to the budget.
    pub single_pass: bool,
}

impl SlsConfig {
    pub fn new(first: FirstBuoy, backtrack: Option<BacktrackVariant>) -> Self {
        Self {
            angles: (0..8).map(|i| 45.0 * i as f64).collect(),
            radius_band: 100.0,
            refinement: 15.0,
            burst: 25,
            threshold: 1e-4,
            first,
            worst_fraction: 0.25,
            backtrack,
            single_pass: false,
        }
    }

    pub fn name(&self) -> &'static str {
        match (self.backtrack, self.first) {
            (Some(BacktrackVariant::B1), _) => "sls-nm-b1",
            (Some(BacktrackVariant::B2), _) => "sls-nm-b2",
            (None, FirstBuoy::Center) => "sls-nm-c",
            (None, FirstBuoy::BottomRight) => "sls-nm-br",
            (None, FirstBuoy::Random) => "sls-nm-r",
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.angles.len() != 8 || self.angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err("sls angles must be 8 strictly increasing values".into());
        }
        if !(self.threshold > 0.0) || !(self.radius_band > 0.0) || self.burst == 0 {
            return Err("sls threshold, radius band and burst must be positive".into());
        }
        Ok(())
    }
}

/// Layout with a new buoy appended.
fn extended(layout: &FarmLayout, p: Position, pto: Pto, ev: &Evaluator<'_>) -> FarmLayout {
    let mut l = layout.clone();
    l.push(p, pto, ev.bounds()).expect("finite sample");
    l
}

/// Evaluates candidate positions for the next buoy and moves the incumbent
/// to the best one (lowest index on ties). Returns how many were scored
/// and the winner's index, or `None` if the budget ran out first.
fn place_best(
    ev: &Evaluator<'_>,
    inc: &mut Incumbent,
    candidates: &[Position],
    pto: Pto,
) -> Option<(usize, usize)> {
    let layouts: Vec<FarmLayout> = candidates
        .iter()
        .map(|&p| extended(&inc.layout, p, pto, ev))
        .collect();
    let evals: Vec<_> = ev.evaluate_batch(&layouts).into_iter().map_while(Result::ok).collect();
    let mut best: Option<usize> = None;
    for (i, e) in evals.iter().enumerate() {
        if best.is_none_or(|b| e.fitness > evals[b].fitness) {
            best = Some(i);
        }
    }
    let b = best?;
    inc.adopt(layouts[b].clone(), &evals[b]);
    (evals.len() == candidates.len()).then_some((evals.len(), b))
}

fn finish(name: &str, opt: &OptimizerConfig, ev: &Evaluator<'_>, mut stats: RunStats, placed: Option<u64>) -> RunRecord {
    stats.placement_evaluations = placed.unwrap_or_else(|| ev.count());
    RunRecord::from_evaluator(name, opt.seed, ev, stats)
}

/// LS-NM: sequential placement from the bottom centre with Gaussian
/// position samples around the previous buoy and a PTO burst per buoy.
pub fn run_ls_nm(ev: &Evaluator<'_>, opt: &OptimizerConfig, cfg: &LsConfig) -> RunRecord {
    let name = cfg.name();
    let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
    let b = *ev.bounds();
    let normal = Normal::new(0.0, cfg.sigma).expect("sigma is positive");
    let mut stats = RunStats::default();
    let nm = &opt.nelder_mead;

    let first = FarmLayout::new(vec![Position::new(b.size / 2.0, 0.0)], vec![uniform_pto(&b, &mut rng)], &b)
        .expect("finite start");
    let mut inc = Incumbent::new(first);
    if burst(ev, nm, &mut inc, Block::Pto(0), cfg.samples).exhausted {
        return finish(&name, opt, ev, stats, None);
    }
    for i in 1..b.n {
        let prev = inc.layout.position(i - 1);
        let pto = inc.layout.pto(i - 1);
        let placed = inc.layout.positions().to_vec();
        let mut candidates = Vec::with_capacity(cfg.samples);
        for _ in 0..cfg.samples {
            let drawn = (0..cfg.max_rejections)
                .map(|_| Position::new(prev.x + normal.sample(&mut rng), prev.y + normal.sample(&mut rng)))
                .find(|p| fits(p, &placed, &b));
            let Some(p) = drawn.or_else(|| uniform_fitting_position(&placed, &b, &mut rng)) else {
                return finish(&name, opt, ev, stats, None);
            };
            candidates.push(p);
        }
        let Some((scored, _)) = place_best(ev, &mut inc, &candidates, pto) else {
            return finish(&name, opt, ev, stats, None);
        };
        stats.placement_samples.push(scored);
        if burst(ev, nm, &mut inc, Block::Pto(i), cfg.samples).exhausted {
            return finish(&name, opt, ev, stats, None);
        }
    }
    finish(&name, opt, ev, stats, None)
}

fn first_position<R: Rng + ?Sized>(cfg: &SlsConfig, ev: &Evaluator<'_>, rng: &mut R) -> Position {
    let b = ev.bounds();
    match cfg.first {
        FirstBuoy::Center => Position::new(b.size / 2.0, 0.0),
        FirstBuoy::BottomRight => Position::new(b.size - b.safety, b.safety),
        FirstBuoy::Random => uniform_position(b, rng),
    }
}

/// Position at `radius` metres from `from` along `degrees`.
fn polar(from: Position, radius: f64, degrees: f64) -> Position {
    let t = degrees.to_radians();
    Position::new(from.x + radius * t.cos(), from.y + radius * t.sin())
}

/// SLS-NM and, with a backtracking variant set, SLS-NM-B.
///
/// Each new buoy is tried in eight directions from the previous one, then
/// at ±15° around the best; infeasible samples are dropped unscored. After
/// placement a 2-D burst improves either the new buoy's PTO or its
/// position, whichever phase last gained at least the threshold (PTO
/// first). With backtracking, new buoys copy the first buoy's PTO and
/// always get the position burst; the worst buoys are then revisited until
/// the budget ends.
pub fn run_sls_nm(ev: &Evaluator<'_>, opt: &OptimizerConfig, cfg: &SlsConfig) -> RunRecord {
    let name = cfg.name();
    let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
    let b = *ev.bounds();
    let nm = &opt.nelder_mead;
    let mut stats = RunStats::default();

    let start = first_position(cfg, ev, &mut rng);
    let first = FarmLayout::new(vec![start], vec![uniform_pto(&b, &mut rng)], &b).expect("finite start");
    let mut inc = Incumbent::new(first);
    let out = burst(ev, nm, &mut inc, Block::Pto(0), cfg.burst);
    if out.exhausted {
        return finish(name, opt, ev, stats, None);
    }
    let mut pto_rate = out.rate();
    let mut pos_rate = 1.0;
    let shared_pto = inc.layout.pto(0);

    for i in 1..b.n {
        let prev = inc.layout.position(i - 1);
        let pto = if cfg.backtrack.is_some() {
            shared_pto
        } else {
            inc.layout.pto(i - 1)
        };
        let placed = inc.layout.positions().to_vec();
        let sample = |degrees: f64, rng: &mut ChaCha8Rng| {
            let r = b.safety + rng.random_range(0.0..=cfg.radius_band);
            Some(polar(prev, r, degrees)).filter(|p| fits(p, &placed, &b))
        };
        let sectors: Vec<(f64, Position)> = cfg
            .angles
            .iter()
            .filter_map(|&a| sample(a, &mut rng).map(|p| (a, p)))
            .collect();

        let scored = if sectors.is_empty() {
            let Some(p) = uniform_fitting_position(&placed, &b, &mut rng) else {
                return finish(name, opt, ev, stats, None);
            };
            let Some((n, _)) = place_best(ev, &mut inc, &[p], pto) else {
                return finish(name, opt, ev, stats, None);
            };
            n
        } else {
            let positions: Vec<Position> = sectors.iter().map(|s| s.1).collect();
            let base = inc.clone();
            let Some((n, best)) = place_best(ev, &mut inc, &positions, pto) else {
                return finish(name, opt, ev, stats, None);
            };
            let angle = sectors[best].0;
            let refined: Vec<Position> = [angle - cfg.refinement, angle + cfg.refinement]
                .into_iter()
                .filter_map(|a| sample(a, &mut rng))
                .collect();
            if refined.is_empty() {
                n
            } else {
                let mut trial = base;
                let Some((m, _)) = place_best(ev, &mut trial, &refined, pto) else {
                    return finish(name, opt, ev, stats, None);
                };
                if trial.fitness > inc.fitness {
                    inc = trial;
                }
                n + m
            }
        };
        stats.placement_samples.push(scored);

        let position_phase = match cfg.backtrack {
            Some(_) => true,
            None if pto_rate >= cfg.threshold => false,
            None if pos_rate >= cfg.threshold => true,
            None => rng.random_bool(0.5),
        };
        let out = if position_phase {
            let out = burst(ev, nm, &mut inc, Block::Position(i), cfg.burst);
            pos_rate = out.rate();
            out
        } else {
            let out = burst(ev, nm, &mut inc, Block::Pto(i), cfg.burst);
            pto_rate = out.rate();
            out
        };
        if out.exhausted {
            return finish(name, opt, ev, stats, None);
        }
    }

    let placed_evals = ev.count();
    if let Some(variant) = cfg.backtrack {
        let k = worst_count(b.n, cfg.worst_fraction);
        let mut offset = 0;
        loop {
            let before = ev.count();
            stats.backtrack_passes += 1;
            let improved = backtrack_pass(ev, nm, &mut inc, variant, cfg, offset);
            if cfg.single_pass || ev.count() == before || ev.remaining() == 0 {
                break;
            }
            // A pass that changed nothing would repeat itself; move on to
            // the next-worst group instead.
            offset = if improved { 0 } else { (offset + k) % b.n };
        }
    }
    finish(name, opt, ev, stats, Some(placed_evals))
}

/// `round(n · fraction)`.
fn worst_count(n: usize, fraction: f64) -> usize {
    (n as f64 * fraction).round() as usize
}

/// The `round(n · fraction)` buoys with the lowest power, skipping the
/// `offset` worst (wrapping). Ties go to the lower index.
pub fn worst_buoys(per_buoy: &[f64], fraction: f64, offset: usize) -> Vec<usize> {
    let n = per_buoy.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| per_buoy[a].total_cmp(&per_buoy[b]));
    (0..worst_count(n, fraction).min(n))
        .map(|j| order[(offset + j) % n])
        .collect()
}

fn backtrack_pass(
    ev: &Evaluator<'_>,
    nm: &NelderMead,
    inc: &mut Incumbent,
    variant: BacktrackVariant,
    cfg: &SlsConfig,
    offset: usize,
) -> bool {
    let mut improved = false;
    for i in worst_buoys(&inc.per_buoy, cfg.worst_fraction, offset) {
        let steps: &[(Block, usize)] = match variant {
            BacktrackVariant::B1 => &[(Block::Pto(i), cfg.burst), (Block::Position(i), cfg.burst)],
            BacktrackVariant::B2 => &[(Block::Joint(i), 2 * cfg.burst)],
        };
        for &(block, evals) in steps {
            let out = burst(ev, nm, inc, block, evals);
            improved |= out.improved;
            if out.exhausted {
                return improved;
            }
        }
    }
    improved
}

/// One backtracking pass over a complete layout: the worst
/// `round(n/4)` buoys by power get Nelder-Mead bursts with everything else
/// frozen. Returns the improved layout, or the input if nothing improved.
pub fn backtrack(
    ev: &Evaluator<'_>,
    nm: &NelderMead,
    layout: &FarmLayout,
    per_buoy_power: &[f64],
    variant: BacktrackVariant,
) -> FarmLayout {
    let cfg = SlsConfig::new(FirstBuoy::Center, Some(variant));
    let mut inc = Incumbent::new(layout.clone());
    inc.per_buoy = per_buoy_power.to_vec();
    backtrack_pass(ev, nm, &mut inc, variant, &cfg, 0);
    inc.layout
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farm::{distance_penalty, Budget, FarmBounds, FarmObjective, Objective, Scored, DEFAULT_PTO};
    use crate::hydro::HydroModel;
    use crate::scenario::bundled;
    use std::sync::Mutex;

    /// Wraps an objective and remembers the largest violation it was asked
    /// to score.
    struct Watch {
        inner: FarmObjective,
        worst: Mutex<f64>,
    }

    impl Watch {
        fn new(n: usize) -> Self {
            Self {
                inner: FarmObjective::new(HydroModel::default(), bundled::monochromatic(), FarmBounds::for_buoys(n)),
                worst: Mutex::new(0.0),
            }
        }

        fn worst(&self) -> f64 {
            *self.worst.lock().unwrap()
        }
    }

    impl Objective for Watch {
        fn score(&self, layout: &FarmLayout) -> Scored {
            let v = distance_penalty(layout.positions(), &self.inner.bounds).sum_violation;
            let mut w = self.worst.lock().unwrap();
            *w = w.max(v);
            self.inner.score(layout)
        }
    }

    fn opt(n: usize, seed: u64) -> OptimizerConfig {
        OptimizerConfig::for_buoys(n, seed)
    }

    #[test]
    fn ls_nm_counts_and_feasibility() {
        for (n, ns) in [(1, 16), (4, 16), (4, 32)] {
            let w = Watch::new(n);
            let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(10_000));
            let r = run_ls_nm(&ev, &opt(n, 2), &LsConfig::with_samples(ns));
            assert_eq!(r.evaluations as usize, ns + (n - 1) * 2 * ns);
            assert_eq!(r.stats.placement_samples, vec![ns; n - 1]);
            assert_eq!(w.worst(), 0.0);
            let best = r.best_layout.unwrap();
            assert_eq!(best.len(), n);
            assert_eq!(distance_penalty(best.positions(), &w.inner.bounds).penalty, 0.0);
        }
    }

    #[test]
    fn ls_nm_single_buoy_stays_at_bottom_centre() {
        let w = Watch::new(1);
        let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(100));
        let r = run_ls_nm(&ev, &opt(1, 5), &LsConfig::with_samples(16));
        let p = r.best_layout.unwrap().position(0);
        assert_eq!((p.x, p.y), (w.inner.bounds.size / 2.0, 0.0));
    }

    #[test]
    fn ls_nm_boxed_in_falls_back_to_uniform() {
        let w = Watch::new(2);
        let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(100));
        // A zero-width offset distribution can never leave the first buoy.
        let cfg = LsConfig {
            samples: 4,
            sigma: 1e-9,
            max_rejections: 10,
        };
        let r = run_ls_nm(&ev, &opt(2, 5), &cfg);
        assert_eq!(r.evaluations, 4 + 8);
        assert_eq!(w.worst(), 0.0);
    }

    #[test]
    fn ls_nm_picks_the_best_sample() {
        let w = Watch::new(2);
        let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(100));
        let r = run_ls_nm(&ev, &opt(2, 9), &LsConfig::with_samples(16));
        // Calls 17..=32 are the second-buoy samples; the burst that follows
        // starts by re-scoring the winner.
        let samples = &r.trace[16..32];
        let winner = r.trace[32].fitness;
        assert!(samples.iter().all(|t| t.fitness <= winner));
        assert!(samples.iter().any(|t| t.fitness == winner));
    }

    #[test]
    fn sls_nm_counts_and_feasibility() {
        for first in [FirstBuoy::Center, FirstBuoy::BottomRight, FirstBuoy::Random] {
            let w = Watch::new(4);
            let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(10_000));
            let cfg = SlsConfig::new(first, None);
            let r = run_sls_nm(&ev, &opt(4, 3), &cfg);
            let samples: usize = r.stats.placement_samples.iter().sum();
            assert_eq!(r.evaluations as usize, 25 + samples + 3 * 25);
            assert!(r.stats.placement_samples.iter().all(|&s| (1..=10).contains(&s)));
            assert_eq!(w.worst(), 0.0);
        }
    }

    #[test]
    fn open_field_buoy_scores_ten_samples() {
        // In a wide farm a randomly placed first buoy well away from the
        // edges leaves every direction and both refinements feasible.
        let mut w = Watch::new(2);
        w.inner.bounds.size = 1000.0;
        let cfg = SlsConfig::new(FirstBuoy::Random, None);
        let mut checked = 0;
        for seed in 0..20 {
            let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(1000));
            let r = run_sls_nm(&ev, &opt(2, seed), &cfg);
            let p = r.best_layout.as_ref().unwrap().position(0);
            if (200.0..800.0).contains(&p.x) && (200.0..800.0).contains(&p.y) {
                assert_eq!(r.stats.placement_samples, vec![10]);
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn bottom_right_start_for_sixteen_buoys() {
        let w = Watch::new(16);
        let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(0));
        let cfg = SlsConfig::new(FirstBuoy::BottomRight, None);
        let p = first_position(&cfg, &ev, &mut ChaCha8Rng::seed_from_u64(0));
        assert!((p.x - 515.69).abs() < 5e-3, "{}", p.x);
        assert_eq!(p.y, 50.0);
    }

    #[test]
    fn sls_nm_is_reproducible() {
        let w = Watch::new(4);
        let cfg = SlsConfig::new(FirstBuoy::Random, None);
        let run = |seed| {
            let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(10_000));
            run_sls_nm(&ev, &opt(4, seed), &cfg)
        };
        let a = run(6);
        assert_eq!(a.trace, run(6).trace);
        assert_eq!(a.best_layout, run(6).best_layout);
    }

    #[test]
    fn sls_nm_b_placement_count_and_budget() {
        for variant in [BacktrackVariant::B1, BacktrackVariant::B2] {
            let w = Watch::new(4);
            let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(600));
            let cfg = SlsConfig::new(FirstBuoy::Center, Some(variant));
            let r = run_sls_nm(&ev, &opt(4, 3), &cfg);
            let samples: usize = r.stats.placement_samples.iter().sum();
            assert_eq!(r.stats.placement_evaluations as usize, 25 + samples + 3 * 25);
            assert_eq!(r.evaluations, 600);
            assert!(r.stats.backtrack_passes >= 1);
            assert_eq!(w.worst(), 0.0);
        }
    }

    #[test]
    fn b1_and_b2_share_the_placement_prefix() {
        let w = Watch::new(4);
        let run = |variant| {
            let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(500));
            run_sls_nm(&ev, &opt(4, 12), &SlsConfig::new(FirstBuoy::Center, Some(variant)))
        };
        let (a, b) = (run(BacktrackVariant::B1), run(BacktrackVariant::B2));
        let k = a.stats.placement_evaluations as usize;
        assert_eq!(k, b.stats.placement_evaluations as usize);
        assert_eq!(a.trace[..k], b.trace[..k]);
        assert_ne!(a.trace[k..], b.trace[k..]);
    }

    #[test]
    fn single_pass_backtracking_stops_early() {
        let w = Watch::new(4);
        let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(5000));
        let mut cfg = SlsConfig::new(FirstBuoy::Center, Some(BacktrackVariant::B1));
        cfg.single_pass = true;
        let r = run_sls_nm(&ev, &opt(4, 3), &cfg);
        assert_eq!(r.evaluations, r.stats.placement_evaluations + 50);
        assert_eq!(r.stats.backtrack_passes, 1);
    }

    #[test]
    fn worst_buoy_selection() {
        let p: Vec<f64> = (0..16).map(|i| ((i * 7) % 16) as f64).collect();
        assert_eq!(worst_buoys(&p, 0.25, 0).len(), 4);
        assert_eq!(worst_buoys(&[3.0, 1.0, 2.0, 5.0], 0.25, 0), vec![1]);
        assert_eq!(worst_buoys(&[2.0; 4], 0.25, 0), vec![0]);
        assert_eq!(worst_buoys(&[2.0; 4], 0.25, 1), vec![1]);
        assert_eq!(worst_buoys(&[1.0; 8], 0.25, 0), vec![0, 1]);
    }

    #[test]
    fn backtrack_never_loses_fitness() {
        let w = Watch::new(4);
        let b = w.inner.bounds;
        let l = FarmLayout::new(
            vec![
                Position::new(20.0, 20.0),
                Position::new(90.0, 20.0),
                Position::new(160.0, 20.0),
                Position::new(90.0, 120.0),
            ],
            vec![DEFAULT_PTO; 4],
            &b,
        )
        .unwrap();
        let before = w.score(&l);
        let per = before.outcome.as_ref().unwrap().per_buoy_power.clone();
        let ev = Evaluator::new(&w, b, Budget::evaluations(1000));
        let out = backtrack(&ev, &NelderMead::default(), &l, &per, BacktrackVariant::B2);
        assert_eq!(ev.count(), 50);
        assert!(w.score(&out).fitness >= before.fitness);
        assert_eq!(w.worst(), 0.0);
    }

    #[test]
    fn sls_nm_b_beats_ls_nm_on_two_buoys() {
        let seeds = 0..10u64;
        let median = |mut v: Vec<f64>| {
            v.sort_by(f64::total_cmp);
            0.5 * (v[4] + v[5])
        };
        let w = Watch::new(2);
        let ls: Vec<f64> = seeds
            .clone()
            .map(|s| {
                let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(400));
                run_ls_nm(&ev, &opt(2, s), &LsConfig::with_samples(16)).best_fitness
            })
            .collect();
        for variant in [BacktrackVariant::B1, BacktrackVariant::B2] {
            let cfg = SlsConfig::new(FirstBuoy::Center, Some(variant));
            let sls: Vec<f64> = seeds
                .clone()
                .map(|s| {
                    let ev = Evaluator::new(&w, w.inner.bounds, Budget::evaluations(400));
                    run_sls_nm(&ev, &opt(2, s), &cfg).best_fitness
                })
                .collect();
            assert!(median(sls) >= median(ls.clone()), "{variant:?}");
        }
    }
}
