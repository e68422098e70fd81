use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::farm::Evaluator;

use super::{score, start_layout, Codec, EaParams, OptimizerConfig, RunRecord, RunStats};

pub const NAME: &str = "1+1ea";

/// Gaussian mutation of the `active` coordinates of an `n`-buoy vector.
///
/// Per-coordinate mode selects each active coordinate with probability
/// `1/|active|`; per-buoy mode selects each buoy with probability `1/n` and
/// perturbs all its active coordinates. If nothing is selected, one
/// coordinate (or buoy) is drawn uniformly. Coordinates in `clamp` are
/// clipped to `[0, 1]`.
pub fn mutate<R: Rng + ?Sized>(
    x: &[f64],
    n: usize,
    active: Range<usize>,
    clamp: Range<usize>,
    params: EaParams,
    rng: &mut R,
) -> Vec<f64> {
    let normal = Normal::new(0.0, params.sigma).expect("sigma is positive");
    let buoy = |j: usize| if j < 2 * n { j / 2 } else { (j - 2 * n) / 2 };
    let selected: Vec<usize> = if params.per_buoy_mutation {
        let mut buoys: Vec<usize> = (0..n).filter(|_| rng.random::<f64>() < 1.0 / n as f64).collect();
        if buoys.is_empty() {
            buoys.push(rng.random_range(0..n));
        }
        active.clone().filter(|&j| buoys.contains(&buoy(j))).collect()
    } else {
        let p = 1.0 / active.len() as f64;
        let mut coords: Vec<usize> = active.clone().filter(|_| rng.random::<f64>() < p).collect();
        if coords.is_empty() {
            coords.push(rng.random_range(active.clone()));
        }
        coords
    };
    let mut y = x.to_vec();
    for j in selected {
        y[j] += normal.sample(rng);
    }
    for j in clamp {
        y[j] = y[j].clamp(0.0, 1.0);
    }
    y
}

/// Elitist (1+1) evolutionary algorithm; children replace the parent when
/// they are not worse.
pub fn run_one_plus_one(ev: &Evaluator<'_>, cfg: &OptimizerConfig) -> RunRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let codec = Codec::new(*ev.bounds());
    let mut parent = codec.encode(&start_layout(&codec.bounds, &mut rng));
    if let Some(mut fit) = score(ev, &codec, &parent) {
        loop {
            let child = mutate(&parent, codec.n, 0..codec.dims(), codec.ptos(), cfg.ea, &mut rng);
            let Some(f) = score(ev, &codec, &child) else {
                break;
            };
            if f >= fit {
                parent = child;
                fit = f;
            }
        }
    }
    RunRecord::from_evaluator(NAME, cfg.seed, ev, RunStats::default())
}
