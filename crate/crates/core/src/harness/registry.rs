use crate::farm::Evaluator;
use crate::optimizers::{run_cma_es, run_de, run_nm_mutation, run_one_plus_one, run_pso, RunRecord};
use crate::strategies::{
    run_alternating, run_dual_de, run_ls_nm, run_sls_nm, AlternatingConfig, BacktrackVariant, FirstBuoy,
    LsConfig, PhaseMethod, SlsConfig,
};

use super::config::{ConfigError, ExperimentConfig};

/// Every registered method, in table order.
pub const METHODS: [&str; 17] = [
    "cma-es",
    "de",
    "pso",
    "1+1ea",
    "nm-m",
    "cmaes-nm",
    "de-nm",
    "1+1ea-nm",
    "dual-de",
    "ls-nm-16",
    "ls-nm-32",
    "ls-nm-64",
    "sls-nm-c",
    "sls-nm-br",
    "sls-nm-r",
    "sls-nm-b1",
    "sls-nm-b2",
];

pub fn is_registered(name: &str) -> bool {
    METHODS.contains(&name)
}

/// Sequential-placement settings for `name` with config overrides applied.
pub fn sls_config(name: &str, cfg: &ExperimentConfig) -> Option<SlsConfig> {
    let (first, backtrack) = match name {
        "sls-nm-c" => (FirstBuoy::Center, None),
        "sls-nm-br" => (FirstBuoy::BottomRight, None),
        "sls-nm-r" => (FirstBuoy::Random, None),
        "sls-nm-b1" => (FirstBuoy::Center, Some(BacktrackVariant::B1)),
        "sls-nm-b2" => (FirstBuoy::Center, Some(BacktrackVariant::B2)),
        _ => return None,
    };
    let mut s = SlsConfig::new(first, backtrack);
    if let Some(r) = cfg.overrides.sls_radius_band {
        s.radius_band = r;
    }
    if let Some(single) = cfg.overrides.boa_single_pass {
        s.single_pass = single;
    }
    Some(s)
}

/// Runs method `name` with run seed `seed` against `ev`.
pub fn run_method(
    name: &str,
    ev: &Evaluator<'_>,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<RunRecord, ConfigError> {
    let opt = cfg.optimizer_config(seed);
    let n = cfg.n;
    let alternating = |m| run_alternating(ev, &opt, &AlternatingConfig::for_buoys(m, n));
    let record = match name {
        "cma-es" => run_cma_es(ev, &opt),
        "de" => run_de(ev, &opt),
        "pso" => run_pso(ev, &opt),
        "1+1ea" => run_one_plus_one(ev, &opt),
        "nm-m" => run_nm_mutation(ev, &opt),
        "cmaes-nm" => alternating(PhaseMethod::CmaEs),
        "de-nm" => alternating(PhaseMethod::De),
        "1+1ea-nm" => alternating(PhaseMethod::OnePlusOne),
        "dual-de" => run_dual_de(ev, &opt),
        "ls-nm-16" => run_ls_nm(ev, &opt, &LsConfig::with_samples(16)),
        "ls-nm-32" => run_ls_nm(ev, &opt, &LsConfig::with_samples(32)),
        "ls-nm-64" => run_ls_nm(ev, &opt, &LsConfig::with_samples(64)),
        _ => match sls_config(name, cfg) {
            Some(s) => {
                s.validate().map_err(ConfigError::Invalid)?;
                run_sls_nm(ev, &opt, &s)
            }
            None => return Err(ConfigError::UnknownMethod(name.to_string())),
        },
    };
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farm::{Budget, FarmBounds};
    use crate::optimizers::surrogates::{Shape, Surrogate};

    #[test]
    fn every_registered_name_runs_and_reports_itself() {
        let s = Surrogate::with_default_center(Shape::Sphere, FarmBounds::for_buoys(2));
        let cfg = ExperimentConfig {
            n: 2,
            ..ExperimentConfig::default()
        };
        for m in METHODS {
            let ev = Evaluator::new(&s, s.bounds, Budget::evaluations(120));
            let r = run_method(m, &ev, &cfg, 1).unwrap();
            assert_eq!(r.method, m);
            assert!(r.evaluations <= 120);
        }
        let ev = Evaluator::new(&s, s.bounds, Budget::evaluations(1));
        assert!(run_method("simulated-annealing", &ev, &cfg, 1).is_err());
    }

    #[test]
    fn seventeen_unique_names() {
        let mut v = METHODS.to_vec();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), 17);
    }
}
