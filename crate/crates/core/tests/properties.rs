//! Run-level invariants shared by every registered method.

use std::sync::atomic::{AtomicU64, Ordering};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wecfarm::farm::{
    is_feasible, random_feasible_layout, Budget, Evaluator, FarmBounds, FarmLayout, FarmObjective, Objective, Scored,
};
use wecfarm::harness::{run_method, ExperimentConfig, METHODS};
use wecfarm::hydro::HydroModel;
use wecfarm::optimizers::NelderMead;
use wecfarm::scenario::bundled;
use wecfarm::strategies::{backtrack, BacktrackVariant};

/// Remembers the highest fitness among complete, successfully scored
/// layouts, and whether any scored layout was infeasible.
struct Watched<'a> {
    inner: &'a FarmObjective,
    best_bits: AtomicU64,
    infeasible: AtomicU64,
}

impl<'a> Watched<'a> {
    fn new(inner: &'a FarmObjective) -> Self {
        Self {
            inner,
            best_bits: AtomicU64::new(f64::NEG_INFINITY.to_bits()),
            infeasible: AtomicU64::new(0),
        }
    }

    fn best(&self) -> f64 {
        f64::from_bits(self.best_bits.load(Ordering::Relaxed))
    }
}

impl Objective for Watched<'_> {
    fn score(&self, layout: &FarmLayout) -> Scored {
        let s = self.inner.score(layout);
        if !is_feasible(layout.positions(), &self.inner.bounds) {
            self.infeasible.fetch_add(1, Ordering::Relaxed);
        }
        if layout.len() == self.inner.bounds.n && s.outcome.is_ok() {
            let _ = self.best_bits.fetch_update(Ordering::Relaxed, Ordering::Relaxed, |b| {
                (s.fitness > f64::from_bits(b)).then_some(s.fitness.to_bits())
            });
        }
        s
    }
}

fn objective(n: usize) -> FarmObjective {
    FarmObjective::new(HydroModel::default(), bundled::perth_like(), FarmBounds::for_buoys(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_keep_their_best_and_their_budget(
        method in proptest::sample::select(METHODS.to_vec()),
        seed in 0u64..1000,
        n in 2usize..=4,
        budget in 40u64..160,
    ) {
        let obj = objective(n);
        let watched = Watched::new(&obj);
        let cfg = ExperimentConfig { n, ..ExperimentConfig::default() };
        let ev = Evaluator::new(&watched, obj.bounds, Budget::evaluations(budget));
        let r = run_method(method, &ev, &cfg, seed).unwrap();

        prop_assert!(r.evaluations <= budget);
        prop_assert_eq!(r.trace.len() as u64, r.evaluations);
        // No lost improvements: the record holds the best complete layout scored.
        prop_assert_eq!(r.best_fitness, watched.best());
        prop_assert!(r.trace.windows(2).all(|w| w[1].best >= w[0].best));
        if let Some(last) = r.trace.last() {
            prop_assert_eq!(last.best, r.best_fitness);
        }
        if let Some(l) = &r.best_layout {
            let b = obj.bounds;
            prop_assert!(l.ptos().iter().all(|p| (b.spring.0..=b.spring.1).contains(&p.k)
                && (b.damper.0..=b.damper.1).contains(&p.d)));
            // Scoring is pure, so the stored best reproduces exactly.
            prop_assert_eq!(obj.score(l).fitness, r.best_fitness);
        }
        if method.starts_with("ls-nm") || method.starts_with("sls-nm") {
            prop_assert_eq!(watched.infeasible.load(Ordering::Relaxed), 0);
        }
    }

    #[test]
    fn backtracking_never_loses_fitness(seed in 0u64..1000, b2 in any::<bool>()) {
        let obj = objective(4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = random_feasible_layout(&obj.bounds, &mut rng).unwrap();
        let before = obj.score(&start);
        let per_buoy = before.outcome.clone().unwrap().per_buoy_power;
        let ev = Evaluator::new(&obj, obj.bounds, Budget::evaluations(120));
        let variant = if b2 { BacktrackVariant::B2 } else { BacktrackVariant::B1 };
        let after = backtrack(&ev, &NelderMead::default(), &start, &per_buoy, variant);
        prop_assert!(obj.score(&after).fitness >= before.fitness);
        prop_assert!(is_feasible(after.positions(), &obj.bounds));
    }
}
