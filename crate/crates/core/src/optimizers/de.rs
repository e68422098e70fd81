use std::ops::Range;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::farm::Evaluator;

use super::{score_batch, start_layout, Codec, DeParams, OptimizerConfig, RunRecord, RunStats};

pub const NAME: &str = "de";

/// One generation of rand/1/bin trial vectors.
///
/// Coordinates in `active` take the donor `x_r1 + F·(x_r2 − x_r3)` with
/// crossover probability `CR` (at least one always does); everything else
/// copies the target member. Coordinates in `clamp` are clipped to `[0, 1]`.
pub fn de_trials<R: Rng + ?Sized>(
    pop: &[Vec<f64>],
    active: Range<usize>,
    clamp: Range<usize>,
    params: DeParams,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let size = pop.len();
    assert!(size >= 4, "rand/1 needs at least four members");
    (0..size)
        .map(|i| {
            let mut picks = sample(rng, size - 1, 3).into_iter().map(|r| if r >= i { r + 1 } else { r });
            let (r1, r2, r3) = (picks.next().unwrap(), picks.next().unwrap(), picks.next().unwrap());
            let forced = rng.random_range(active.clone());
            let mut trial = pop[i].clone();
            for j in active.clone() {
                if j == forced || rng.random::<f64>() < params.crossover {
                    trial[j] = pop[r1][j] + params.weight * (pop[r2][j] - pop[r3][j]);
                }
            }
            for j in clamp.clone() {
                trial[j] = trial[j].clamp(0.0, 1.0);
            }
            trial
        })
        .collect()
}

/// DE rand/1/bin over the full `4n` vector.
pub fn run_de(ev: &Evaluator<'_>, cfg: &OptimizerConfig) -> RunRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let codec = Codec::new(*ev.bounds());
    let mut pop: Vec<Vec<f64>> = (0..cfg.population)
        .map(|_| codec.encode(&start_layout(&codec.bounds, &mut rng)))
        .collect();
    if let Some(mut fit) = score_batch(ev, &codec, &pop) {
        loop {
            let trials = de_trials(&pop, 0..codec.dims(), codec.ptos(), cfg.de, &mut rng);
            let Some(tf) = score_batch(ev, &codec, &trials) else {
                break;
            };
            for (i, (t, f)) in trials.into_iter().zip(tf).enumerate() {
                if f >= fit[i] {
                    pop[i] = t;
                    fit[i] = f;
                }
            }
        }
    }
    RunRecord::from_evaluator(NAME, cfg.seed, ev, RunStats::default())
}
