use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::farm::Evaluator;

use super::{score_batch, start_layout, Codec, OptimizerConfig, RunRecord, RunStats};

pub const NAME: &str = "cma-es";

/// (μ/μ_w, λ)-CMA-ES in ask/tell form, maximizing.
///
/// Default weights and learning rates; the covariance is decomposed after
/// every update, which is cheap at the dimensions used here.
#[derive(Debug, Clone)]
pub struct CmaEs {
    dim: usize,
    lambda: usize,
    weights: Vec<f64>,
    mueff: f64,
    cc: f64,
    cs: f64,
    c1: f64,
    cmu: f64,
    damps: f64,
    chi_n: f64,
    mean: DVector<f64>,
    sigma: f64,
    pc: DVector<f64>,
    ps: DVector<f64>,
    cov: DMatrix<f64>,
    basis: DMatrix<f64>,
    scales: DVector<f64>,
    generation: u64,
    /// Plus-selection: the previous parents and their fitness, competing
    /// with the next offspring.
    parents: Option<Vec<(Vec<f64>, f64)>>,
}

impl CmaEs {
    /// `mu` parents out of `lambda` offspring; `mu ≤ lambda`.
    pub fn new(mean: &[f64], sigma: f64, lambda: usize, mu: usize) -> Self {
        assert!(mu >= 1 && mu <= lambda);
        let n = mean.len() as f64;
        let raw: Vec<f64> = (1..=mu)
            .map(|i| (mu as f64 + 0.5).ln() - (i as f64).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mueff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        let cc = (4.0 + mueff / n) / (n + 4.0 + 2.0 * mueff / n);
        let cs = (mueff + 2.0) / (n + mueff + 5.0);
        let c1 = 2.0 / ((n + 1.3).powi(2) + mueff);
        let cmu = (1.0 - c1).min(2.0 * (mueff - 2.0 + 1.0 / mueff) / ((n + 2.0).powi(2) + mueff));
        let damps = 1.0 + 2.0 * (((mueff - 1.0) / (n + 1.0)).sqrt() - 1.0).max(0.0) + cs;
        let chi_n = n.sqrt() * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
        let dim = mean.len();
        Self {
            dim,
            lambda,
            weights,
            mueff,
            cc,
            cs,
            c1,
            cmu: cmu.max(0.0),
            damps,
            chi_n,
            mean: DVector::from_column_slice(mean),
            sigma,
            pc: DVector::zeros(dim),
            ps: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim),
            basis: DMatrix::identity(dim, dim),
            scales: DVector::from_element(dim, 1.0),
            generation: 0,
            parents: None,
        }
    }

    /// Switches to (μ+λ) selection: parents survive until offspring beat
    /// them.
    pub fn elitist(mut self) -> Self {
        self.parents = Some(Vec::new());
        self
    }

    /// Best surviving parent under plus-selection.
    pub fn best_parent(&self) -> Option<&(Vec<f64>, f64)> {
        self.parents.as_ref().and_then(|p| p.first())
    }

    /// Replaces the surviving parents, e.g. after the objective changed
    /// under them. No effect without plus-selection.
    pub fn reset_parents(&mut self, parents: Vec<(Vec<f64>, f64)>) {
        if let Some(p) = &mut self.parents {
            *p = parents;
        }
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn mean(&self) -> &[f64] {
        self.mean.as_slice()
    }

    /// Draws λ candidates.
    pub fn ask<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vec<f64>> {
        (0..self.lambda)
            .map(|_| {
                let z = DVector::from_fn(self.dim, |_, _| rng.sample::<f64, _>(StandardNormal));
                let y = &self.basis * z.component_mul(&self.scales);
                (&self.mean + self.sigma * y).as_slice().to_vec()
            })
            .collect()
    }

    /// Updates the distribution from the candidates returned by the last
    /// [`CmaEs::ask`] and their fitness (higher is better).
    pub fn tell(&mut self, candidates: &[Vec<f64>], fitness: &[f64]) {
        assert_eq!(candidates.len(), fitness.len());
        let mut pool: Vec<(Vec<f64>, f64)> = candidates.iter().cloned().zip(fitness.iter().copied()).collect();
        if let Some(parents) = &self.parents {
            pool.extend(parents.iter().cloned());
        }
        // Stable: on ties offspring rank ahead of surviving parents.
        pool.sort_by(|a, b| b.1.total_cmp(&a.1));
        pool.truncate(self.weights.len());
        let n = self.dim as f64;

        let old = self.mean.clone();
        let steps: Vec<DVector<f64>> = pool
            .iter()
            .map(|(x, _)| (DVector::from_column_slice(x) - &old) / self.sigma)
            .collect();
        if let Some(parents) = &mut self.parents {
            *parents = pool;
        }
        let mut y_w = DVector::zeros(self.dim);
        for (w, y) in self.weights.iter().zip(&steps) {
            y_w += *w * y;
        }
        self.mean = &old + self.sigma * &y_w;

        // C^{-1/2} y_w = B D^{-1} Bᵀ y_w
        let inv_sqrt = &self.basis * (self.basis.transpose() * &y_w).component_div(&self.scales);
        self.ps = (1.0 - self.cs) * &self.ps + (self.cs * (2.0 - self.cs) * self.mueff).sqrt() * inv_sqrt;
        self.generation += 1;
        let ps_norm = self.ps.norm();
        let decay = 1.0 - (1.0 - self.cs).powi(2 * self.generation as i32);
        let hsig = ps_norm / decay.sqrt() / self.chi_n < 1.4 + 2.0 / (n + 1.0);
        let h = if hsig { 1.0 } else { 0.0 };
        self.pc = (1.0 - self.cc) * &self.pc + h * (self.cc * (2.0 - self.cc) * self.mueff).sqrt() * &y_w;

        let mut rank_mu = DMatrix::zeros(self.dim, self.dim);
        for (w, y) in self.weights.iter().zip(&steps) {
            rank_mu += *w * y * y.transpose();
        }
        let rank_one = &self.pc * self.pc.transpose() + (1.0 - h) * self.cc * (2.0 - self.cc) * &self.cov;
        self.cov = (1.0 - self.c1 - self.cmu) * &self.cov + self.c1 * rank_one + self.cmu * rank_mu;
        self.cov = 0.5 * (&self.cov + self.cov.transpose());

        self.sigma *= ((self.cs / self.damps) * (ps_norm / self.chi_n - 1.0)).exp();
        self.sigma = self.sigma.clamp(1e-300, 1e6);

        let eig = SymmetricEigen::new(self.cov.clone());
        self.basis = eig.eigenvectors;
        self.scales = eig.eigenvalues.map(|v| v.max(1e-300).sqrt());
    }
}

/// CMA-ES over the full `4n` unit-cube vector from a random feasible start.
pub fn run_cma_es(ev: &Evaluator<'_>, cfg: &OptimizerConfig) -> RunRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let codec = Codec::new(*ev.bounds());
    let start = codec.encode(&start_layout(&codec.bounds, &mut rng));
    let lambda = cfg.cma_population;
    let mut es = CmaEs::new(&start, cfg.cma_sigma, lambda, lambda / 2);
    loop {
        let xs = es.ask(&mut rng);
        let Some(fit) = score_batch(ev, &codec, &xs) else {
            break;
        };
        es.tell(&xs, &fit);
    }
    RunRecord::from_evaluator(NAME, cfg.seed, ev, RunStats::default())
}
