use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::farm::Evaluator;

use super::{score_batch, start_layout, Codec, OptimizerConfig, RunRecord, RunStats};

pub const NAME: &str = "pso";

/// Global-best particle swarm over the full `4n` vector. Inertia falls
/// linearly with the share of the evaluation budget spent.
pub fn run_pso(ev: &Evaluator<'_>, cfg: &OptimizerConfig) -> RunRecord {
    let p = cfg.pso;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let codec = Codec::new(*ev.bounds());
    let dims = codec.dims();
    let vmax = p.velocity_clamp;
    let mut xs: Vec<Vec<f64>> = (0..cfg.population)
        .map(|_| codec.encode(&start_layout(&codec.bounds, &mut rng)))
        .collect();
    let mut vs: Vec<Vec<f64>> = (0..cfg.population)
        .map(|_| (0..dims).map(|_| rng.random_range(-vmax..=vmax)).collect())
        .collect();

    if let Some(fit) = score_batch(ev, &codec, &xs) {
        let mut pbest = xs.clone();
        let mut pbest_fit = fit;
        let mut g = argmax(&pbest_fit);
        let budget = ev.budget().max_evaluations as f64;
        loop {
            let spent = (ev.count() as f64 / budget).min(1.0);
            let w = p.inertia_start - (p.inertia_start - p.inertia_end) * spent;
            for (i, (x, v)) in xs.iter_mut().zip(vs.iter_mut()).enumerate() {
                for j in 0..dims {
                    let r1: f64 = rng.random();
                    let r2: f64 = rng.random();
                    let step = w * v[j]
                        + p.cognitive * r1 * (pbest[i][j] - x[j])
                        + p.social * r2 * (pbest[g][j] - x[j]);
                    v[j] = step.clamp(-vmax, vmax);
                    x[j] += v[j];
                }
                codec.clamp_ptos(x);
            }
            let Some(fit) = score_batch(ev, &codec, &xs) else {
                break;
            };
            for (i, f) in fit.into_iter().enumerate() {
                if f > pbest_fit[i] {
                    pbest_fit[i] = f;
                    pbest[i] = xs[i].clone();
                }
            }
            g = argmax(&pbest_fit);
        }
    }
    RunRecord::from_evaluator(NAME, cfg.seed, ev, RunStats::default())
}

/// Index of the largest value, lowest index on ties.
fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}
