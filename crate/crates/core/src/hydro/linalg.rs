//! Dense complex LU with partial pivoting and a 1-norm condition estimate.

use num_complex::Complex64;

/// Row-major square complex matrix factored in place as `P·A = L·U`.
#[derive(Debug, Clone)]
pub struct ComplexLu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    norm1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singular;

impl ComplexLu {
    pub fn factor(n: usize, mut a: Vec<Complex64>) -> Result<Self, Singular> {
        assert_eq!(a.len(), n * n);
        let norm1 = (0..n)
            .map(|j| (0..n).map(|i| a[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (pivot, pmag) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(pmag > 0.0) || !pmag.is_finite() {
                return Err(Singular);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                perm.swap(col, pivot);
            }
            let inv = a[col * n + col].inv();
            for r in col + 1..n {
                let factor = a[r * n + col] * inv;
                a[r * n + col] = factor;
                if factor != Complex64::new(0.0, 0.0) {
                    for j in col + 1..n {
                        let u = a[col * n + j];
                        a[r * n + j] -= factor * u;
                    }
                }
            }
        }
        Ok(Self {
            n,
            lu: a,
            perm,
            norm1,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Solves `Aᴴ x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        // Uᴴ w = b, forward.
        let mut w = b.to_vec();
        for i in 0..n {
            let mut s = w[i];
            for j in 0..i {
                s -= self.lu[j * n + i].conj() * w[j];
            }
            w[i] = s / self.lu[i * n + i].conj();
        }
        // Lᴴ z = w, backward, unit diagonal.
        for i in (0..n).rev() {
            let mut s = w[i];
            for j in i + 1..n {
                s -= self.lu[j * n + i].conj() * w[j];
            }
            w[i] = s;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = w[i];
        }
        x
    }

    /// Estimate of ‖A‖₁·‖A⁻¹‖₁ (Hager/Higham iteration, never larger than
    /// the true value).
    pub fn condition_estimate(&self) -> f64 {
        self.norm1 * self.inverse_norm1_estimate()
    }

    fn inverse_norm1_estimate(&self) -> f64 {
        let n = self.n;
        if n == 1 {
            return 1.0 / self.lu[0].norm();
        }
        let norm1 = |v: &[Complex64]| v.iter().map(|z| z.norm()).sum::<f64>();
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut y = self.solve(&x);
        let mut est = norm1(&y);
        for iter in 0..5 {
            let xi: Vec<Complex64> = y
                .iter()
                .map(|&v| {
                    let m = v.norm();
                    if m > 0.0 {
                        v / m
                    } else {
                        Complex64::new(1.0, 0.0)
                    }
                })
                .collect();
            let z = self.solve_adjoint(&xi);
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.norm()))
                .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
            if iter > 0 {
                let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
                if zmax <= ztx {
                    break;
                }
            }
            x = vec![Complex64::new(0.0, 0.0); n];
            x[j] = Complex64::new(1.0, 0.0);
            y = self.solve(&x);
            let next = norm1(&y);
            if next <= est {
                break;
            }
            est = next;
        }
        // Alternating-sign probe catches matrices the iteration underestimates.
        let alt: Vec<Complex64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(s * (1.0 + i as f64 / (n - 1) as f64), 0.0)
            })
            .collect();
        let alt_est = 2.0 * norm1(&self.solve(&alt)) / (3.0 * n as f64);
        est.max(alt_est)
    }
}
