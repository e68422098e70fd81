//! Frequency-domain power model for arrays of submerged point absorbers.
//!
//! Each buoy moves in one degree of freedom. For every wave cell the
//! complex velocity amplitudes solve
//!
//! ```text
//! Z v = f,   Z = jω(M + A) + B + D_pto − j K_pto / ω
//! ```
//!
//! and the absorbed power is
//!
//! ```text
//! P = ¼ (fᴴv + vᴴf) − ½ vᴴBv  =  ½ Σᵢ Dᵢ |vᵢ|²
//! ```
//!
//! The hydrodynamic coefficients come from an analytical interaction
//! kernel: a single-body radiation damping curve `b(ω)` peaked at the
//! reference frequency, coupled between buoys through `J0(k·d)`, constant
//! diagonal added mass, and plane-wave excitation phases.

mod bessel;
mod linalg;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub use bessel::bessel_j0;
pub use linalg::{ComplexLu, Singular};

use crate::farm::{FarmLayout, Position, Pto};
use crate::scenario::{wavenumber, WaveScenario};

/// Degrees of freedom per buoy. Matrices are `n·DOFS_PER_BUOY` square.
pub const DOFS_PER_BUOY: usize = 1;

/// Impedance matrices with a condition estimate above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HydroError {
    #[error("buoys {0} and {1} share a position")]
    CoincidentBuoys(usize, usize),
    #[error("wave frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("singular impedance at omega={omega} rad/s, theta={theta} deg")]
    Singular { omega: f64, theta: f64 },
    #[error("ill-conditioned impedance at omega={omega} rad/s, theta={theta} deg (condition ~{condition:e})")]
    IllConditioned {
        omega: f64,
        theta: f64,
        condition: f64,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid hydrodynamic parameter: {0}")]
    Parameter(String),
}

/// Parameters of the coefficient provider.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydroModel {
    /// Buoy mass (kg), identical for every buoy.
    pub mass: f64,
    /// Single-buoy added mass `a0` (kg).
    pub added_mass: f64,
    /// Radiation damping scale `b0` (N·s/m), reached at the reference frequency.
    pub damping_scale: f64,
    /// Reference frequency `omega0` (rad/s).
    pub reference_frequency: f64,
    /// Excitation force per metre of wave amplitude `f0` (N/m).
    pub excitation_scale: f64,
}

impl Default for HydroModel {
    fn default() -> Self {
        let mass = 3.76e5;
        Self {
            mass,
            added_mass: 0.5 * mass,
            damping_scale: 9.0e4,
            reference_frequency: 1.0,
            excitation_scale: 1.0e5,
        }
    }
}

impl HydroModel {
    pub fn validate(&self) -> Result<(), HydroError> {
        let fields = [
            ("mass", self.mass),
            ("added_mass", self.added_mass),
            ("damping_scale", self.damping_scale),
            ("reference_frequency", self.reference_frequency),
            ("excitation_scale", self.excitation_scale),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(HydroError::Parameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Single-buoy radiation damping
    /// `b(ω) = b0 (ω/ω0)³ exp(1.5 (1 − (ω/ω0)²))`.
    pub fn radiation_damping(&self, omega: f64) -> f64 {
        let r = omega / self.reference_frequency;
        self.damping_scale * r * r * r * (1.5 * (1.0 - r * r)).exp()
    }

    /// Spring stiffness that cancels the inertial reactance at `omega`.
    pub fn resonant_stiffness(&self, omega: f64) -> f64 {
        (self.mass + self.added_mass) * omega * omega
    }
}

/// Hydrodynamic coefficients of one (frequency, direction) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyCase {
    pub omega: f64,
    /// Wave heading in degrees.
    pub theta: f64,
    /// Added mass `A` (kg), symmetric.
    pub added_mass: DMatrix<f64>,
    /// Radiation damping `B` (N·s/m), symmetric positive semidefinite.
    pub damping: DMatrix<f64>,
    /// Excitation force phasors (N).
    pub excitation: DVector<Complex64>,
}

impl FrequencyCase {
    pub fn len(&self) -> usize {
        self.excitation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.excitation.is_empty()
    }
}

/// Power of one layout over a whole scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    /// Weighted mean farm power (W).
    pub total_power: f64,
    /// PTO-absorbed power of each buoy (W); sums to `total_power`.
    pub per_buoy_power: Vec<f64>,
    /// Power of each buoy operating alone with the same PTO (W).
    pub isolated_power: Vec<f64>,
    /// `total_power / Σ isolated_power`.
    pub q_factor: f64,
    /// Per-cell breakdown, direction-major, when requested.
    pub cells: Option<Vec<CellPower>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellPower {
    pub theta: f64,
    pub omega: f64,
    pub weight: f64,
    /// Unweighted farm power of this cell (W).
    pub power: f64,
}

fn check_positions(positions: &[Position]) -> Result<(), HydroError> {
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            if positions[i] == positions[j] {
                return Err(HydroError::CoincidentBuoys(i, j));
            }
        }
    }
    Ok(())
}

fn damping_matrix(model: &HydroModel, positions: &[Position], omega: f64, k: f64) -> DMatrix<f64> {
    let n = positions.len();
    let b = model.radiation_damping(omega);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = b;
        for j in i + 1..n {
            let v = b * bessel_j0(k * positions[i].distance(&positions[j]));
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn excitation(
    model: &HydroModel,
    positions: &[Position],
    omega: f64,
    k: f64,
    theta_deg: f64,
    amplitude: f64,
) -> DVector<Complex64> {
    let magnitude =
        amplitude * model.excitation_scale * (model.radiation_damping(omega) / model.damping_scale).sqrt();
    let (s, c) = theta_deg.to_radians().sin_cos();
    DVector::from_iterator(
        positions.len(),
        positions
            .iter()
            .map(|p| Complex64::from_polar(magnitude, -k * (p.x * c + p.y * s))),
    )
}

/// Coefficients of one wave cell for buoys at `positions`.
pub fn coefficients(
    model: &HydroModel,
    positions: &[Position],
    omega: f64,
    theta: f64,
    amplitude: f64,
) -> Result<FrequencyCase, HydroError> {
    check_positions(positions)?;
    let k = wavenumber(omega).map_err(|_| HydroError::NonPositiveFrequency(omega))?;
    let n = positions.len();
    Ok(FrequencyCase {
        omega,
        theta,
        added_mass: DMatrix::from_diagonal_element(n, n, model.added_mass),
        damping: damping_matrix(model, positions, omega, k),
        excitation: excitation(model, positions, omega, k, theta, amplitude),
    })
}

/// Complex velocity amplitudes solving the impedance equation.
pub fn solve_motion(
    case: &FrequencyCase,
    model: &HydroModel,
    pto: &[Pto],
) -> Result<DVector<Complex64>, HydroError> {
    let n = case.len();
    if pto.len() != n {
        return Err(HydroError::Dimension(format!(
            "{} PTO settings for {n} buoys",
            pto.len()
        )));
    }
    let w = case.omega;
    let mut z = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let inertia = if i == j { model.mass } else { 0.0 } + case.added_mass[(i, j)];
            z[i * n + j] = Complex64::new(case.damping[(i, j)], w * inertia);
        }
        z[i * n + i] += Complex64::new(pto[i].d, -pto[i].k / w);
    }
    let f: Vec<Complex64> = case.excitation.iter().copied().collect();
    let v = solve_impedance(n, z, &f, case.omega, case.theta)?;
    Ok(DVector::from_vec(v))
}

fn solve_impedance(
    n: usize,
    z: Vec<Complex64>,
    f: &[Complex64],
    omega: f64,
    theta: f64,
) -> Result<Vec<Complex64>, HydroError> {
    let original = z.clone();
    let lu = ComplexLu::factor(n, z).map_err(|_| HydroError::Singular { omega, theta })?;
    let condition = lu.condition_estimate();
    if !(condition <= MAX_CONDITION) {
        return Err(HydroError::IllConditioned {
            omega,
            theta,
            condition,
        });
    }
    let v = lu.solve(f);
    let fnorm = f.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let rnorm = (0..n)
        .map(|i| {
            let r: Complex64 = (0..n).map(|j| original[i * n + j] * v[j]).sum::<Complex64>() - f[i];
            r.norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    if rnorm > RESIDUAL_TOL * fnorm {
        return Err(HydroError::IllConditioned {
            omega,
            theta,
            condition,
        });
    }
    Ok(v)
}

/// Total power from the excitation/radiation form and the per-buoy
/// PTO-absorbed decomposition `½ Dᵢ |vᵢ|²`.
pub fn power(case: &FrequencyCase, v: &DVector<Complex64>, pto: &[Pto]) -> (f64, Vec<f64>) {
    let total = excitation_form_power(&case.excitation, &case.damping, v);
    let per_buoy = v
        .iter()
        .zip(pto)
        .map(|(vi, p)| 0.5 * p.d * vi.norm_sqr())
        .collect();
    (total, per_buoy)
}

fn excitation_form_power(f: &DVector<Complex64>, b: &DMatrix<f64>, v: &DVector<Complex64>) -> f64 {
    let n = v.len();
    let fv: Complex64 = f.iter().zip(v.iter()).map(|(fi, vi)| fi.conj() * vi).sum();
    let vf: Complex64 = v.iter().zip(f.iter()).map(|(vi, fi)| vi.conj() * fi).sum();
    let mut vbv = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            vbv += v[i].conj() * b[(i, j)] * v[j];
        }
    }
    0.25 * (fv + vf).re - 0.5 * vbv.re
}

/// Weighted power of a layout over every scenario cell, with q-factor.
pub fn farm_power(
    model: &HydroModel,
    scenario: &WaveScenario,
    layout: &FarmLayout,
) -> Result<EvaluationResult, HydroError> {
    farm_power_with(model, scenario, layout, false)
}

/// As [`farm_power`], optionally retaining the per-cell breakdown.
pub fn farm_power_with(
    model: &HydroModel,
    scenario: &WaveScenario,
    layout: &FarmLayout,
    retain_cells: bool,
) -> Result<EvaluationResult, HydroError> {
    let (total, per_buoy, cells) = weighted_power(model, scenario, layout, retain_cells)?;
    let n = layout.len();
    let isolated: Vec<f64> = if n == 1 {
        vec![total]
    } else {
        (0..n)
            .map(|i| weighted_power(model, scenario, &layout.single(i), false).map(|r| r.0))
            .collect::<Result<_, _>>()?
    };
    let iso_sum: f64 = isolated.iter().sum();
    Ok(EvaluationResult {
        total_power: total,
        per_buoy_power: per_buoy,
        q_factor: total / iso_sum,
        isolated_power: isolated,
        cells,
    })
}

type Weighted = (f64, Vec<f64>, Option<Vec<CellPower>>);

fn weighted_power(
    model: &HydroModel,
    scenario: &WaveScenario,
    layout: &FarmLayout,
    retain_cells: bool,
) -> Result<Weighted, HydroError> {
    let positions = layout.positions();
    let ptos = layout.ptos();
    check_positions(positions)?;
    let n = positions.len();
    let dirs = scenario.directions();
    let freqs = scenario.frequencies();
    let (nd, nf) = (dirs.len(), freqs.len());

    // Cell results are stored direction-major and reduced in that fixed
    // order; the damping matrix is shared by all headings of a frequency.
    let mut cell_total = vec![0.0; nd * nf];
    let mut cell_buoy = vec![0.0; nd * nf * n];
    for (fi, &omega) in freqs.iter().enumerate() {
        let k = wavenumber(omega).map_err(|_| HydroError::NonPositiveFrequency(omega))?;
        let case_b = damping_matrix(model, positions, omega, k);
        for (di, &theta) in dirs.iter().enumerate() {
            let case = FrequencyCase {
                omega,
                theta,
                added_mass: DMatrix::from_diagonal_element(n, n, model.added_mass),
                damping: case_b.clone(),
                excitation: excitation(model, positions, omega, k, theta, scenario.amplitude()),
            };
            let v = solve_motion(&case, model, ptos)?;
            let (t, pb) = power(&case, &v, ptos);
            let cell = di * nf + fi;
            cell_total[cell] = t;
            cell_buoy[cell * n..(cell + 1) * n].copy_from_slice(&pb);
        }
    }

    let mut total = 0.0;
    let mut per_buoy = vec![0.0; n];
    let mut cells = retain_cells.then(|| Vec::with_capacity(nd * nf));
    for di in 0..nd {
        for fi in 0..nf {
            let cell = di * nf + fi;
            let w = scenario.weight(di, fi);
            total += w * cell_total[cell];
            for (acc, p) in per_buoy.iter_mut().zip(&cell_buoy[cell * n..(cell + 1) * n]) {
                *acc += w * p;
            }
            if let Some(c) = cells.as_mut() {
                c.push(CellPower {
                    theta: dirs[di],
                    omega: freqs[fi],
                    weight: w,
                    power: cell_total[cell],
                });
            }
        }
    }
    Ok((total, per_buoy, cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farm::FarmBounds;
    use crate::scenario::bundled;
    use proptest::prelude::*;

    fn layout(pts: &[(f64, f64)], pto: Pto) -> FarmLayout {
        let b = FarmBounds::for_buoys(pts.len());
        FarmLayout::new(
            pts.iter().map(|&(x, y)| Position::new(x, y)).collect(),
            vec![pto; pts.len()],
            &b,
        )
        .unwrap()
    }

    #[test]
    fn single_buoy_at_reference_frequency() {
        let m = HydroModel::default();
        let case = coefficients(&m, &[Position::new(37.0, -12.0)], 1.0, 30.0, 1.0).unwrap();
        assert_eq!(case.damping[(0, 0)], m.damping_scale);
        assert!((case.excitation[0].norm() - m.excitation_scale).abs() < 1e-9);
    }

    #[test]
    fn first_bessel_zero_decouples_damping() {
        let m = HydroModel::default();
        let omega = 0.8;
        let k = wavenumber(omega).unwrap();
        let d = 2.404_825_557_695_773 / k;
        let case = coefficients(&m, &[Position::new(0.0, 0.0), Position::new(d, 0.0)], omega, 0.0, 1.0).unwrap();
        assert!(case.damping[(0, 1)].abs() < 1e-9 * case.damping[(0, 0)]);
        assert_eq!(case.damping[(0, 1)], case.damping[(1, 0)]);
    }

    #[test]
    fn equal_x_gives_equal_phase_for_heading_zero() {
        let m = HydroModel::default();
        let case = coefficients(&m, &[Position::new(0.0, 0.0), Position::new(0.0, 100.0)], 1.0, 0.0, 1.0).unwrap();
        assert!((case.excitation[0] - case.excitation[1]).norm() < 1e-9);
    }

    #[test]
    fn coincident_positions_are_rejected() {
        let m = HydroModel::default();
        let p = Position::new(5.0, 5.0);
        assert_eq!(coefficients(&m, &[p, p], 1.0, 0.0, 1.0), Err(HydroError::CoincidentBuoys(0, 1)));
        assert!(coefficients(&m, &[p], 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn resonant_single_buoy() {
        let m = HydroModel::default();
        let omega = m.reference_frequency;
        let case = coefficients(&m, &[Position::new(0.0, 0.0)], omega, 0.0, 1.0).unwrap();
        let pto = [Pto::new(m.resonant_stiffness(omega), m.damping_scale)];
        let v = solve_motion(&case, &m, &pto).unwrap();
        let expected = case.excitation[0] / (2.0 * m.damping_scale);
        assert!((v[0] - expected).norm() < 1e-12 * expected.norm());
        let (total, per) = power(&case, &v, &pto);
        let fmax = case.excitation[0].norm_sqr() / (8.0 * m.damping_scale);
        assert!((total - fmax).abs() < 1e-9 * fmax);
        assert!((per[0] - fmax).abs() < 1e-9 * fmax);
    }

    #[test]
    fn heavy_damping_reduces_velocity() {
        let m = HydroModel::default();
        let case = coefficients(&m, &[Position::new(0.0, 0.0)], 1.0, 0.0, 1.0).unwrap();
        let res = solve_motion(&case, &m, &[Pto::new(m.resonant_stiffness(1.0), m.damping_scale)]).unwrap();
        let heavy = solve_motion(&case, &m, &[Pto::new(2.75e5, 4e5)]).unwrap();
        assert!(heavy[0].norm() < res[0].norm());
    }

    #[test]
    fn symmetric_pair_moves_identically() {
        let m = HydroModel::default();
        // Heading 90° runs along y; the buoys are mirror images across it.
        let case = coefficients(&m, &[Position::new(-40.0, 10.0), Position::new(40.0, 10.0)], 0.9, 90.0, 1.0).unwrap();
        let v = solve_motion(&case, &m, &[DEFAULT_PTO_FOR_TEST, DEFAULT_PTO_FOR_TEST]).unwrap();
        assert!((v[0] - v[1]).norm() < 1e-9 * v[0].norm());
    }

    const DEFAULT_PTO_FOR_TEST: Pto = crate::farm::DEFAULT_PTO;

    #[test]
    fn zero_velocity_zero_power() {
        let m = HydroModel::default();
        let case = coefficients(&m, &[Position::new(0.0, 0.0), Position::new(60.0, 0.0)], 1.0, 0.0, 1.0).unwrap();
        let v = DVector::from_element(2, Complex64::new(0.0, 0.0));
        let (t, per) = power(&case, &v, &[DEFAULT_PTO_FOR_TEST; 2]);
        assert_eq!(t, 0.0);
        assert_eq!(per, vec![0.0, 0.0]);
    }

    fn isolated_cell_power(m: &HydroModel, pto: Pto, omega: f64) -> f64 {
        let case = coefficients(m, &[Position::new(0.0, 0.0)], omega, 0.0, 1.0).unwrap();
        let v = solve_motion(&case, m, &[pto]).unwrap();
        power(&case, &v, &[pto]).0
    }

    #[test]
    fn far_separated_pair_is_nearly_two_isolated_buoys() {
        let m = HydroModel::default();
        let pto = DEFAULT_PTO_FOR_TEST;
        for &(omega, theta) in &[(1.0, 0.0), (0.7, 45.0), (1.3, 120.0)] {
            let k = wavenumber(omega).unwrap();
            let d = 400.0 / k; // k·d = 400
            let case = coefficients(&m, &[Position::new(0.0, 0.0), Position::new(d, 0.0)], omega, theta, 1.0).unwrap();
            let v = solve_motion(&case, &m, &[pto, pto]).unwrap();
            let pair = power(&case, &v, &[pto, pto]).0;
            let iso = 2.0 * isolated_cell_power(&m, pto, omega);
            assert!((pair / iso - 1.0).abs() < 0.05, "omega={omega}: {pair} vs {iso}");
        }
    }

    #[test]
    fn q_factor_single_buoy_is_one() {
        let m = HydroModel::default();
        let r = farm_power(&m, &bundled::perth_like(), &layout(&[(100.0, 0.0)], DEFAULT_PTO_FOR_TEST)).unwrap();
        assert_eq!(r.q_factor, 1.0);
        assert_eq!(r.per_buoy_power.len(), 1);
    }

    #[test]
    fn q_factor_at_2000m_is_near_one() {
        let m = HydroModel::default();
        let s = bundled::monochromatic();
        for theta_layout in [0.0f64, 30.0, 90.0] {
            let (sn, cs) = theta_layout.to_radians().sin_cos();
            let l = layout(&[(0.0, 0.0), (2000.0 * cs, 2000.0 * sn)], DEFAULT_PTO_FOR_TEST);
            let q = farm_power(&m, &s, &l).unwrap().q_factor;
            assert!((0.95..=1.05).contains(&q), "q = {q}");
        }
    }

    #[test]
    fn repeated_evaluation_is_bit_identical() {
        let m = HydroModel::default();
        let s = bundled::sydney_like();
        let l = layout(&[(0.0, 0.0), (70.0, 10.0), (20.0, 90.0)], DEFAULT_PTO_FOR_TEST);
        assert_eq!(farm_power(&m, &s, &l).unwrap(), farm_power(&m, &s, &l).unwrap());
    }

    #[test]
    fn retained_cells_reproduce_total() {
        let m = HydroModel::default();
        let s = bundled::perth_like();
        let l = layout(&[(0.0, 0.0), (70.0, 10.0)], DEFAULT_PTO_FOR_TEST);
        let r = farm_power_with(&m, &s, &l, true).unwrap();
        let cells = r.cells.as_ref().unwrap();
        assert_eq!(cells.len(), 350);
        let sum: f64 = cells.iter().map(|c| c.weight * c.power).sum();
        assert!((sum - r.total_power).abs() < 1e-9 * r.total_power);
    }

    #[test]
    fn invalid_parameters() {
        let mut m = HydroModel::default();
        assert!(m.validate().is_ok());
        m.damping_scale = 0.0;
        assert!(m.validate().is_err());
    }

    fn arb_positions(n: usize) -> impl Strategy<Value = Vec<Position>> {
        proptest::collection::vec((0.0f64..400.0, 0.0f64..400.0), n)
            .prop_map(|v| v.into_iter().map(|(x, y)| Position::new(x, y)).collect())
    }

    fn arb_ptos(n: usize) -> impl Strategy<Value = Vec<Pto>> {
        proptest::collection::vec((1.0f64..5.5e5, 5e4f64..4e5), n)
            .prop_map(|v| v.into_iter().map(|(k, d)| Pto::new(k, d)).collect())
    }

    proptest! {
        #[test]
        fn power_identity_and_nonnegativity(
            (pos, pto) in (1usize..7).prop_flat_map(|n| (arb_positions(n), arb_ptos(n))),
            omega in 0.3f64..1.6,
            theta in 0.0f64..360.0,
        ) {
            let m = HydroModel::default();
            let case = coefficients(&m, &pos, omega, theta, 1.0).unwrap();
            let v = solve_motion(&case, &m, &pto).unwrap();
            let (total, per) = power(&case, &v, &pto);
            let sum: f64 = per.iter().sum();
            prop_assert!((total - sum).abs() <= 1e-9 * sum.abs().max(1e-300));
            prop_assert!(total >= -1e-9 * sum);
        }

        #[test]
        fn damping_is_positive_semidefinite(pos in (2usize..10).prop_flat_map(arb_positions), omega in 0.3f64..1.6) {
            let m = HydroModel::default();
            let k = wavenumber(omega).unwrap();
            let b = damping_matrix(&m, &pos, omega, k);
            let eig = b.clone().symmetric_eigenvalues();
            let scale = b.norm();
            prop_assert!(eig.iter().all(|&e| e >= -1e-9 * scale), "{eig:?}");
        }

        #[test]
        fn translation_invariance(dx in -500.0f64..500.0, dy in -500.0f64..500.0, seed in 0u64..1000) {
            let m = HydroModel::default();
            let s = bundled::sydney_like();
            let off = (seed % 97) as f64;
            let l = layout(&[(0.0, 0.0), (55.0 + off, 20.0), (10.0, 80.0 + off)], DEFAULT_PTO_FOR_TEST);
            let a = farm_power(&m, &s, &l).unwrap();
            let b = farm_power(&m, &s, &l.translated(dx, dy)).unwrap();
            prop_assert!((a.total_power - b.total_power).abs() <= 1e-9 * a.total_power);
            for (p, q) in a.per_buoy_power.iter().zip(&b.per_buoy_power) {
                prop_assert!((p - q).abs() <= 1e-9 * p);
            }
        }

        #[test]
        fn permutation_equivariance(pos in arb_positions(4), pto in arb_ptos(4), perm in Just(vec![2usize, 0, 3, 1])) {
            let m = HydroModel::default();
            let s = bundled::perth_like();
            let l = FarmLayout::new(pos, pto, &FarmBounds::for_buoys(4)).unwrap();
            let a = farm_power(&m, &s, &l).unwrap();
            let b = farm_power(&m, &s, &l.permuted(&perm)).unwrap();
            for (new_i, &old_i) in perm.iter().enumerate() {
                let (x, y) = (a.per_buoy_power[old_i], b.per_buoy_power[new_i]);
                prop_assert!((x - y).abs() <= 1e-9 * x);
            }
        }
    }
}
