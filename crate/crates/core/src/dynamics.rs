//! Effective dynamics of the measured pair `(2,3)`.
//!
//! In the basis `{Φ¹ = GE, Φ² = EG, Φ³ = EE, Φ⁴ = GG}` the effective
//! Hamiltonian is a 4×4 Hermitian matrix `S(t)`, and every spectator family
//! obeys `i·dX/dt = S(t)·X`. All four families share one propagator, so they
//! are evolved together as the columns of [`AmplitudeFamilies`].

use ndarray::{array, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::integrator::{self, IntegratorOptions, LinearGenerator};
use crate::linalg::{self, I};
use crate::params::{derived_frequencies, FrequencySet, ModelParams};
use crate::register::AmplitudeFamilies;

/// Two detunings closer than this are treated as equal.
pub const EQUAL_FREQUENCY_TOL: f64 = 1e-12;

fn phase(w: f64) -> C64 {
    C64::from_polar(1.0, w)
}

/// `S(t)` for already validated frequencies.
pub fn s_matrix_with(p: &ModelParams, f: &FrequencySet, t: f64) -> Array2<C64> {
    let [_, w2, w3, w4] = f.omega;
    let w = &f.omega_ij;
    let self2 = p.g2 * p.g2 / w[1][1];
    let self3 = p.g3 * p.g3 / w[2][2];
    let exchange = p.g2 * p.g3 / w[1][2];
    let pump2 = p.g2 * p.e_p / w[1][3];
    let pump3 = p.g3 * p.e_p / w[2][3];

    let ex = phase((w2 - w3) * t);
    let ph2 = phase((w4 - w2) * t);
    let ph3 = phase((w4 - w3) * t);
    let c = C64::from;

    array![
        [c(-self3), -exchange * ex, pump2 * ph2.conj(), pump3 * ph3],
        [-exchange * ex.conj(), c(-self2), pump3 * ph3.conj(), pump2 * ph2],
        [pump2 * ph2, pump3 * ph3, c(-(self2 + self3)), c(0.0)],
        [pump3 * ph3.conj(), pump2 * ph2.conj(), c(0.0), c(0.0)],
    ]
}

/// Generator of the `(2,3)` dynamics at time `t`.
pub fn s_matrix(p: &ModelParams, t: f64) -> Result<Array2<C64>> {
    let f = derived_frequencies(p)?;
    Ok(s_matrix_with(p, &f, t))
}

/// `X ↦ −i·S(t)·X` for the integrator.
pub struct EffectiveGenerator {
    params: ModelParams,
    freqs: FrequencySet,
    bound: f64,
}

impl EffectiveGenerator {
    pub fn new(p: &ModelParams) -> Result<Self> {
        let freqs = derived_frequencies(p)?;
        // Entry magnitudes do not depend on t.
        let bound = linalg::inf_norm(&s_matrix_with(p, &freqs, 0.0).view());
        Ok(Self { params: *p, freqs, bound })
    }

    pub fn is_time_independent(&self) -> bool {
        self.freqs.ionic_spread() <= EQUAL_FREQUENCY_TOL
    }
}

impl LinearGenerator for EffectiveGenerator {
    fn apply(&self, t: f64, x: &Array2<C64>) -> Array2<C64> {
        s_matrix_with(&self.params, &self.freqs, t).dot(x).mapv(|z| -I * z)
    }

    fn norm_bound(&self) -> f64 {
        self.bound
    }
}

/// Sampled solution of the family equations.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t_grid: Vec<f64>,
    pub families: Vec<AmplitudeFamilies>,
}

impl Trajectory {
    /// Largest `|‖X(t)‖² − ‖X(0)‖²|` over the samples.
    pub fn norm_drift(&self) -> f64 {
        let n0 = self.families[0].total_norm_sq();
        self.families
            .iter()
            .map(|f| (f.total_norm_sq() - n0).abs())
            .fold(0.0, f64::max)
    }
}

fn check_start(t_grid: &[f64]) -> Result<()> {
    integrator::check_grid(t_grid)?;
    if t_grid[0] != 0.0 {
        return Err(Error::InvalidGrid(format!("grid must start at 0, not {}", t_grid[0])));
    }
    Ok(())
}

/// Integrates all four families with the controlled RK4 scheme.
pub fn evolve(p: &ModelParams, x0: &AmplitudeFamilies, t_grid: &[f64]) -> Result<Trajectory> {
    evolve_with(p, x0, t_grid, &IntegratorOptions::default())
}

pub fn evolve_with(
    p: &ModelParams,
    x0: &AmplitudeFamilies,
    t_grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    check_start(t_grid)?;
    let gen = EffectiveGenerator::new(p)?;
    let states = integrator::integrate(&gen, &x0.m, t_grid, opts)?;
    Ok(Trajectory {
        t_grid: t_grid.to_vec(),
        families: states.into_iter().map(AmplitudeFamilies::new).collect(),
    })
}

/// `exp(−i·S·t)` when all ionic detunings coincide and `S` is constant.
pub fn propagator_const(p: &ModelParams, t: f64) -> Result<Array2<C64>> {
    let f = derived_frequencies(p)?;
    let spread = f.ionic_spread();
    if spread > EQUAL_FREQUENCY_TOL {
        return Err(Error::NotTimeIndependent { spread });
    }
    let s = s_matrix_with(p, &f, 0.0);
    Ok(linalg::unitary_propagator(&s.view(), t))
}

/// Samples `U(t)·X₀` on the grid via the matrix exponential.
pub fn evolve_const(p: &ModelParams, x0: &AmplitudeFamilies, t_grid: &[f64]) -> Result<Trajectory> {
    check_start(t_grid)?;
    let families = t_grid
        .iter()
        .map(|&t| Ok(AmplitudeFamilies::new(propagator_const(p, t)?.dot(&x0.m))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { t_grid: t_grid.to_vec(), families })
}

/// Exponential path when `S` is constant, integrator otherwise.
pub fn evolve_auto(p: &ModelParams, x0: &AmplitudeFamilies, t_grid: &[f64]) -> Result<Trajectory> {
    if EffectiveGenerator::new(p)?.is_time_independent() {
        evolve_const(p, x0, t_grid)
    } else {
        evolve(p, x0, t_grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, hermiticity_defect, identity, max_abs_diff};
    use crate::register::initial_protocol_families;

    fn uneven() -> ModelParams {
        // ω2 = ω3 = 0.9, ω4 = 1.7, ω1 = 0.4
        ModelParams {
            omega_c: 4.2,
            omega_m: 0.4,
            nu: 1.1,
            omega_0: 2.2,
            omega_p: 2.5,
            e_p: 0.8,
            g_om: 0.3,
            g2: 1.0,
            g3: 0.7,
        }
    }

    #[test]
    fn s_matrix_baseline_values() {
        let mut p = ModelParams::baseline();
        p.g2 = 1.0;
        p.g3 = 1.0;
        let s = s_matrix(&p, 3.7).unwrap();
        let expected = [
            [-2.5, -2.5, 1.25, 1.25],
            [-2.5, -2.5, 1.25, 1.25],
            [1.25, 1.25, -5.0, 0.0],
            [1.25, 1.25, 0.0, 0.0],
        ];
        for r in 0..4 {
            for c in 0..4 {
                assert!((s[[r, c]] - C64::from(expected[r][c])).norm() < 1e-12, "({r},{c}) {}", s[[r, c]]);
            }
        }
    }

    #[test]
    fn s_matrix_is_hermitian() {
        let p = uneven();
        for k in 0..50 {
            let s = s_matrix(&p, 0.37 * k as f64).unwrap();
            assert!(hermiticity_defect(&s.view()) < 1e-14);
        }
    }

    #[test]
    fn no_pump_leaves_only_exchange_block() {
        let mut p = uneven();
        p.e_p = 0.0;
        let s = s_matrix(&p, 1.3).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let in_block = r < 2 && c < 2;
                if !in_block && r != c {
                    assert_eq!(s[[r, c]], C64::from(0.0));
                }
            }
        }
        assert_eq!(s[[3, 3]], C64::from(0.0));
        assert!(s[[0, 1]].norm() > 0.0);
    }

    #[test]
    fn unequal_ionic_detunings_keep_exchange_phase() {
        // ω2 ≠ ω3 cannot come from ModelParams, so build the table directly.
        let p = uneven();
        let f = FrequencySet::from_omegas([0.4, 0.9, 1.3, 1.7]).unwrap();
        let t = 0.8;
        let s = s_matrix_with(&p, &f, t);
        let expected = -p.g2 * p.g3 / f.omega_ij[1][2] * C64::from_polar(1.0, (0.9 - 1.3) * t);
        assert!((s[[0, 1]] - expected).norm() < 1e-14);
        assert!(hermiticity_defect(&s.view()) < 1e-14);
    }

    #[test]
    fn evolve_at_zero_time_is_identity() {
        let x0 = initial_protocol_families();
        let tr = evolve(&uneven(), &x0, &[0.0]).unwrap();
        assert_eq!(tr.families[0], x0);
    }

    #[test]
    fn evolve_requires_grid_from_zero() {
        let x0 = initial_protocol_families();
        assert!(matches!(evolve(&uneven(), &x0, &[0.5, 1.0]), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn fixed_steps_converge_at_fourth_order() {
        let p = ModelParams::degenerate(0.4, 0.5);
        let x0 = initial_protocol_families();
        let gen = EffectiveGenerator::new(&p).unwrap();
        let exact = propagator_const(&p, 2.0).unwrap().dot(&x0.m);
        let err = |n| {
            let x = integrator::rk4_fixed(&gen, &x0.m, 0.0, 2.0, n);
            max_abs_diff(&x.view(), &exact.view())
        };
        let ratio = err(200) / err(400);
        assert!((12.0..20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn evolve_agrees_with_exponential_when_constant() {
        let p = ModelParams::degenerate(0.4, 0.5);
        let x0 = initial_protocol_families();
        let grid: Vec<f64> = (0..=40).map(|k| k as f64 * 0.25).collect();
        let tr = evolve(&p, &x0, &grid).unwrap();
        for (t, f) in grid.iter().zip(&tr.families) {
            let u = propagator_const(&p, *t).unwrap();
            assert!(max_abs_diff(&f.m.view(), &u.dot(&x0.m).view()) < 1e-8);
        }
    }

    #[test]
    fn closed_form_exchange_rotation() {
        // E_P = 0: α-family(t) = ½ e^{iJt}(cos Jt, i sin Jt, 0, 0), J = g²/ω.
        let p = ModelParams::degenerate(0.7, 0.0);
        let j = 1.0 / 0.7;
        let x0 = initial_protocol_families();
        let grid: Vec<f64> = (0..=30).map(|k| k as f64 * 0.2).collect();
        let tr = evolve(&p, &x0, &grid).unwrap();
        for (t, f) in grid.iter().zip(&tr.families) {
            let g = C64::from_polar(0.5, j * t);
            let expected = [g * (j * t).cos(), g * I * (j * t).sin(), C64::from(0.0), C64::from(0.0)];
            for r in 0..4 {
                assert!((f.m[[r, 0]] - expected[r]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn propagator_is_unitary_group() {
        let p = ModelParams::degenerate(0.4, 5.0);
        assert!(max_abs_diff(&propagator_const(&p, 0.0).unwrap().view(), &identity(4).view()) < 1e-15);
        for &t in &[0.3, 4.1, 17.9, 50.0] {
            let u = propagator_const(&p, t).unwrap();
            let back = propagator_const(&p, -t).unwrap();
            assert!(max_abs_diff(&u.dot(&back).view(), &identity(4).view()) < 1e-12);
            assert!(max_abs_diff(&dagger(&u.view()).dot(&u).view(), &identity(4).view()) < 1e-12);
        }
    }

    #[test]
    fn propagator_rejects_time_dependent_generator() {
        assert!(matches!(propagator_const(&uneven(), 1.0), Err(Error::NotTimeIndependent { .. })));
    }

    #[test]
    fn time_dependent_evolution_conserves_norm_and_gram() {
        let x0 = initial_protocol_families();
        let grid: Vec<f64> = (0..=100).map(|k| k as f64 * 0.2).collect();
        let tr = evolve(&uneven(), &x0, &grid).unwrap();
        assert!(tr.norm_drift() < 1e-8);
        for f in &tr.families {
            let gram = f.gram();
            for r in 0..4 {
                for c in 0..4 {
                    let expected = if r == c { 0.25 } else { 0.0 };
                    assert!((gram[[r, c]] - C64::from(expected)).norm() < 1e-9);
                }
            }
            for row in 0..4 {
                assert!((f.row_state(row).norm_sq() - 0.25).abs() < 1e-9);
            }
        }
    }
}
