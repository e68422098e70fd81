use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::farm::Evaluator;
use crate::optimizers::{
    de_trials, mutate, score, score_batch, start_layout, CmaEs, Codec, OptimizerConfig, RunRecord, RunStats,
};

/// Position-phase search of an alternating method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMethod {
    /// (2+2) CMA-ES.
    CmaEs,
    De,
    OnePlusOne,
}

impl PhaseMethod {
    pub fn name(self) -> &'static str {
        match self {
            PhaseMethod::CmaEs => "cmaes-nm",
            PhaseMethod::De => "de-nm",
            PhaseMethod::OnePlusOne => "1+1ea-nm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingConfig {
    pub method: PhaseMethod,
    /// Position-phase generations (or mutations, for the (1+1) EA).
    pub iterations: usize,
}

impl AlternatingConfig {
    /// 25 generations, except 200 (n ≤ 4) or 50 mutations for the EA.
    pub fn for_buoys(method: PhaseMethod, n: usize) -> Self {
        let iterations = match method {
            PhaseMethod::OnePlusOne if n <= 4 => 200,
            PhaseMethod::OnePlusOne => 50,
            _ => 25,
        };
        Self { method, iterations }
    }
}

/// Generations between complement exchanges in Dual-DE.
pub const DUAL_DE_ITERATIONS: usize = 25;

/// Population size of the CMA-ES position phase (μ = λ = 2).
const CMA_PHASE_POPULATION: usize = 2;

fn join(pos: &[f64], pto: &[f64]) -> Vec<f64> {
    pos.iter().chain(pto).copied().collect()
}

fn clamped(v: Vec<f64>) -> Vec<f64> {
    v.into_iter().map(|x| x.clamp(0.0, 1.0)).collect()
}

/// Lowest index holding the largest value.
fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |best, i| if v[i] > v[best] { i } else { best })
}

/// Alternates a position-only search with a Nelder-Mead PTO burst on the
/// best member, until the budget ends. The burst runs for
/// `iterations × λ` evaluations.
pub fn run_alternating(ev: &Evaluator<'_>, opt: &OptimizerConfig, cfg: &AlternatingConfig) -> RunRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
    let codec = Codec::new(*ev.bounds());
    let mut stats = RunStats::default();
    match cfg.method {
        PhaseMethod::CmaEs => alternate_cma(ev, opt, cfg, &codec, &mut rng, &mut stats),
        PhaseMethod::De => alternate_de(ev, opt, cfg, &codec, &mut rng, &mut stats),
        PhaseMethod::OnePlusOne => alternate_ea(ev, opt, cfg, &codec, &mut rng, &mut stats),
    }
    RunRecord::from_evaluator(cfg.method.name(), opt.seed, ev, stats)
}

/// NM burst on a PTO block with positions fixed. Returns the new block and
/// its fitness when it beats `current`.
fn pto_phase(
    ev: &Evaluator<'_>,
    opt: &OptimizerConfig,
    codec: &Codec,
    pos: &[f64],
    pto: &[f64],
    current: f64,
    evals: usize,
) -> (Option<(Vec<f64>, f64)>, bool) {
    let out = opt
        .nelder_mead
        .maximize(pto, evals, |t| score(ev, codec, &join(pos, t)));
    let better = (out.best_value > current).then(|| (clamped(out.best), out.best_value));
    (better, out.exhausted || out.evaluations < evals)
}

fn alternate_cma(
    ev: &Evaluator<'_>,
    opt: &OptimizerConfig,
    cfg: &AlternatingConfig,
    codec: &Codec,
    rng: &mut ChaCha8Rng,
    stats: &mut RunStats,
) {
    let start = codec.encode(&start_layout(&codec.bounds, rng));
    let mut pto = start[codec.ptos()].to_vec();
    let lambda = CMA_PHASE_POPULATION;
    let mut es = CmaEs::new(&start[codec.positions()], opt.cma_sigma, lambda, lambda).elitist();
    loop {
        for _ in 0..cfg.iterations {
            let xs = es.ask(rng);
            let full: Vec<Vec<f64>> = xs.iter().map(|p| join(p, &pto)).collect();
            let Some(fit) = score_batch(ev, codec, &full) else {
                return;
            };
            es.tell(&xs, &fit);
        }
        let (pos, fit) = es.best_parent().cloned().expect("elitist CMA-ES keeps parents");
        let (better, done) = pto_phase(ev, opt, codec, &pos, &pto, fit, cfg.iterations * lambda);
        let fit = match better {
            Some((t, f)) => {
                pto = t;
                f
            }
            None => fit,
        };
        // Other parents were scored under the old PTO; keep only the one
        // whose fitness is current.
        es.reset_parents(vec![(pos, fit)]);
        if done {
            return;
        }
        stats.phases += 1;
    }
}

fn alternate_de(
    ev: &Evaluator<'_>,
    opt: &OptimizerConfig,
    cfg: &AlternatingConfig,
    codec: &Codec,
    rng: &mut ChaCha8Rng,
    stats: &mut RunStats,
) {
    let mut pop: Vec<Vec<f64>> = (0..opt.population)
        .map(|_| codec.encode(&start_layout(&codec.bounds, rng)))
        .collect();
    let Some(mut fit) = score_batch(ev, codec, &pop) else {
        return;
    };
    loop {
        for _ in 0..cfg.iterations {
            let trials = de_trials(&pop, codec.positions(), 0..0, opt.de, rng);
            let Some(tf) = score_batch(ev, codec, &trials) else {
                return;
            };
            for (i, (t, f)) in trials.into_iter().zip(tf).enumerate() {
                if f >= fit[i] {
                    pop[i] = t;
                    fit[i] = f;
                }
            }
        }
        let b = argmax(&fit);
        let (pos, pto) = pop[b].split_at(2 * codec.n);
        let (better, done) = pto_phase(ev, opt, codec, pos, pto, fit[b], cfg.iterations * opt.population);
        if let Some((t, f)) = better {
            pop[b][codec.ptos()].copy_from_slice(&t);
            fit[b] = f;
        }
        if done {
            return;
        }
        stats.phases += 1;
    }
}

fn alternate_ea(
    ev: &Evaluator<'_>,
    opt: &OptimizerConfig,
    cfg: &AlternatingConfig,
    codec: &Codec,
    rng: &mut ChaCha8Rng,
    stats: &mut RunStats,
) {
    let mut parent = codec.encode(&start_layout(&codec.bounds, rng));
    let Some(mut fit) = score(ev, codec, &parent) else {
        return;
    };
    loop {
        for _ in 0..cfg.iterations {
            let child = mutate(&parent, codec.n, codec.positions(), 0..0, opt.ea, rng);
            let Some(f) = score(ev, codec, &child) else {
                return;
            };
            if f >= fit {
                parent = child;
                fit = f;
            }
        }
        let (pos, pto) = parent.split_at(2 * codec.n);
        let (better, done) = pto_phase(ev, opt, codec, pos, pto, fit, cfg.iterations);
        if let Some((t, f)) = better {
            parent[codec.ptos()].copy_from_slice(&t);
            fit = f;
        }
        if done {
            return;
        }
        stats.phases += 1;
    }
}

pub const DUAL_DE_NAME: &str = "dual-de";

/// Two DE populations, one over positions and one over PTOs, each scored
/// against a fixed complement from the other. Every
/// [`DUAL_DE_ITERATIONS`] generations both bests become the new
/// complements and both populations are re-scored.
pub fn run_dual_de(ev: &Evaluator<'_>, opt: &OptimizerConfig) -> RunRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
    let codec = Codec::new(*ev.bounds());
    let mut stats = RunStats::default();
    let (pr, tr) = (codec.positions(), codec.ptos());

    let shared = codec.encode(&start_layout(&codec.bounds, &mut rng));
    let mut pos_pop: Vec<Vec<f64>> = (0..opt.population)
        .map(|_| {
            let mut m = codec.encode(&start_layout(&codec.bounds, &mut rng));
            m[tr.clone()].copy_from_slice(&shared[tr.clone()]);
            m
        })
        .collect();
    let mut pto_pop: Vec<Vec<f64>> = (0..opt.population)
        .map(|_| {
            let mut m = shared.clone();
            for v in &mut m[tr.clone()] {
                *v = rng.random();
            }
            m
        })
        .collect();

    'run: {
        let Some(mut pos_fit) = score_batch(ev, &codec, &pos_pop) else {
            break 'run;
        };
        let Some(mut pto_fit) = score_batch(ev, &codec, &pto_pop) else {
            break 'run;
        };
        for generation in 1.. {
            let pos_trials = de_trials(&pos_pop, pr.clone(), 0..0, opt.de, &mut rng);
            let pto_trials = de_trials(&pto_pop, tr.clone(), tr.clone(), opt.de, &mut rng);
            let Some(pf) = score_batch(ev, &codec, &pos_trials) else {
                break 'run;
            };
            let Some(tf) = score_batch(ev, &codec, &pto_trials) else {
                break 'run;
            };
            for (pop, fit, trials, tfit) in [
                (&mut pos_pop, &mut pos_fit, pos_trials, pf),
                (&mut pto_pop, &mut pto_fit, pto_trials, tf),
            ] {
                for (i, (t, f)) in trials.into_iter().zip(tfit).enumerate() {
                    if f >= fit[i] {
                        pop[i] = t;
                        fit[i] = f;
                    }
                }
            }
            if generation % DUAL_DE_ITERATIONS == 0 {
                let best_pos = pos_pop[argmax(&pos_fit)][pr.clone()].to_vec();
                let best_pto = pto_pop[argmax(&pto_fit)][tr.clone()].to_vec();
                for m in &mut pos_pop {
                    m[tr.clone()].copy_from_slice(&best_pto);
                }
                for m in &mut pto_pop {
                    m[pr.clone()].copy_from_slice(&best_pos);
                }
                stats.exchanges += 1;
                let Some(f) = score_batch(ev, &codec, &pos_pop) else {
                    break 'run;
                };
                pos_fit = f;
                let Some(f) = score_batch(ev, &codec, &pto_pop) else {
                    break 'run;
                };
                pto_fit = f;
            }
        }
    }
    RunRecord::from_evaluator(DUAL_DE_NAME, opt.seed, ev, stats)
}
