/// Nelder-Mead simplex search, maximizing.
///
/// Runs as a fixed-length burst: [`NelderMead::maximize`] stops after
/// exactly `max_evals` objective calls, or earlier if the objective
/// reports that the shared budget is gone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Offset of the initial simplex vertices from the start point.
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            initial_step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NmOutcome {
    /// Best point evaluated (the start point if nothing beat it).
    pub best: Vec<f64>,
    /// `-∞` if no evaluation happened.
    pub best_value: f64,
    /// Value of the start point; `-∞` if it was never evaluated.
    pub start_value: f64,
    pub evaluations: usize,
    /// The objective returned `None` before the burst finished.
    pub exhausted: bool,
}

struct Counter<F> {
    f: F,
    left: usize,
    used: usize,
    exhausted: bool,
    best: Vec<f64>,
    best_value: f64,
}

impl<F: FnMut(&[f64]) -> Option<f64>> Counter<F> {
    fn call(&mut self, x: &[f64]) -> Option<f64> {
        if self.left == 0 || self.exhausted {
            return None;
        }
        match (self.f)(x) {
            Some(v) => {
                self.left -= 1;
                self.used += 1;
                if v > self.best_value {
                    self.best_value = v;
                    self.best = x.to_vec();
                }
                Some(v)
            }
            None => {
                self.exhausted = true;
                None
            }
        }
    }
}

impl NelderMead {
    /// Maximizes `f` from `start`. `f` returns `None` once the caller's
    /// budget is exhausted, which ends the burst.
    ///
    /// The initial simplex steps `initial_step` along each axis, downward
    /// when the upward step would leave `[0, 1]`.
    pub fn maximize<F>(&self, start: &[f64], max_evals: usize, f: F) -> NmOutcome
    where
        F: FnMut(&[f64]) -> Option<f64>,
    {
        let dim = start.len();
        let mut c = Counter {
            f,
            left: max_evals,
            used: 0,
            exhausted: false,
            best: start.to_vec(),
            best_value: f64::NEG_INFINITY,
        };
        let start_value = c.call(start);
        let finish = |c: Counter<F>| NmOutcome {
            best: c.best,
            best_value: c.best_value,
            start_value: start_value.unwrap_or(f64::NEG_INFINITY),
            evaluations: c.used,
            exhausted: c.exhausted,
        };
        let Some(v0) = start_value else {
            return finish(c);
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.to_vec(), v0)];
        for i in 0..dim {
            let mut x = start.to_vec();
            x[i] += if x[i] + self.initial_step > 1.0 {
                -self.initial_step
            } else {
                self.initial_step
            };
            let Some(v) = c.call(&x) else {
                return finish(c);
            };
            simplex.push((x, v));
        }
        if dim == 0 {
            return finish(c);
        }

        loop {
            // Best first; stable sort keeps earlier vertices ahead on ties.
            simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
            let worst = simplex[dim].clone();
            let second_worst = simplex[dim - 1].1;
            let best = simplex[0].1;
            let mut centroid = vec![0.0; dim];
            for (x, _) in &simplex[..dim] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / dim as f64;
                }
            }
            let along = |t: f64, from: &[f64]| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(from)
                    .map(|(c, x)| c + t * (x - c))
                    .collect()
            };

            let xr = along(-self.reflection, &worst.0);
            let Some(fr) = c.call(&xr) else { break };
            if fr > best {
                let xe = along(-self.reflection * self.expansion, &worst.0);
                let Some(fe) = c.call(&xe) else { break };
                simplex[dim] = if fe > fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr > second_worst {
                simplex[dim] = (xr, fr);
                continue;
            }
            let accepted = if fr > worst.1 {
                let xc = along(-self.reflection * self.contraction, &worst.0);
                let Some(fc) = c.call(&xc) else { break };
                (fc >= fr).then_some((xc, fc))
            } else {
                let xc = along(self.contraction, &worst.0);
                let Some(fc) = c.call(&xc) else { break };
                (fc > worst.1).then_some((xc, fc))
            };
            if let Some(v) = accepted {
                simplex[dim] = v;
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = anchor
                    .iter()
                    .zip(&vertex.0)
                    .map(|(a, x)| a + self.shrink * (x - a))
                    .collect();
                let Some(v) = c.call(&x) else {
                    return finish(c);
                };
                *vertex = (x, v);
            }
        }
        finish(c)
    }
}
