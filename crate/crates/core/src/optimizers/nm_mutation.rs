use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::farm::Evaluator;

use super::{improvement_rate, score, start_layout, Codec, OptimizerConfig, RunRecord, RunStats};

pub const NAME: &str = "nm-m";

/// Repeated Nelder-Mead passes over all `4n` coordinates. When a pass
/// brings no relative improvement, whole-vector Gaussian mutations are
/// drawn around the incumbent until one beats it, and the next pass
/// restarts from there.
pub fn run_nm_mutation(ev: &Evaluator<'_>, cfg: &OptimizerConfig) -> RunRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let codec = Codec::new(*ev.bounds());
    let normal = Normal::new(0.0, cfg.nm_mutation.sigma).expect("sigma is positive");
    let mut stats = RunStats::default();
    let mut incumbent = codec.encode(&start_layout(&codec.bounds, &mut rng));
    let mut best = f64::NEG_INFINITY;

    'outer: loop {
        let pass = cfg
            .nelder_mead
            .maximize(&incumbent, cfg.nm_mutation.max_evals, |u| score(ev, &codec, u));
        if improvement_rate(pass.best_value, best) > 0.0 {
            best = pass.best_value;
            incumbent = pass.best;
        } else {
            loop {
                if pass.exhausted || ev.remaining() == 0 {
                    break 'outer;
                }
                let mut trial: Vec<f64> = incumbent.iter().map(|x| x + normal.sample(&mut rng)).collect();
                codec.clamp_ptos(&mut trial);
                let Some(f) = score(ev, &codec, &trial) else {
                    break 'outer;
                };
                stats.mutation_draws += 1;
                if f > best {
                    best = f;
                    incumbent = trial;
                    break;
                }
            }
        }
        if pass.exhausted || pass.evaluations == 0 {
            break;
        }
    }
    RunRecord::from_evaluator(NAME, cfg.seed, ev, stats)
}
