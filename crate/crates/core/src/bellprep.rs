//! Preparation of the Bell-like resource pairs in an ordinary optical cavity.
//!
//! Two ions starting in `|E⟩|G⟩` exchange their excitation through the
//! dispersively coupled cavity; at `t = πδ/(4g²)` the pair is maximally
//! entangled with a relative phase `i`, which a phase gate followed by a
//! Pauli-Z on the second ion removes.
//!
//! The closed form drops the common self-energy phase `e^{ig²t/δ}`, so
//! comparisons against a direct exponential hold up to a global phase.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::register::PairState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrepParams {
    /// Ion–field coupling, equal for both ions.
    pub g: f64,
    /// `δ = ω_c − ν − ω_0`
    pub delta: f64,
}

impl PrepParams {
    pub fn new(g: f64, delta: f64) -> Self {
        Self { g, delta }
    }

    /// Exchange rate `g²/δ`.
    pub fn rate(&self) -> f64 {
        self.g * self.g / self.delta
    }
}

/// `cos(g²t/δ)|EG⟩ + i sin(g²t/δ)|GE⟩`
pub fn pair_evolution(p: &PrepParams, t: f64) -> PairState {
    let x = p.rate() * t;
    PairState::new(C64::from(x.cos()), C64::new(0.0, x.sin()), C64::from(0.0), C64::from(0.0))
}

/// First time at which the pair is maximally entangled: `πδ/(4g²)`.
pub fn prep_time(p: &PrepParams) -> f64 {
    PI * p.delta / (4.0 * p.g * p.g)
}

/// Single-qubit map applied to the second ion in its `(G, E)` basis:
/// the phase gate `diag(1, e^{iπ/2})` followed by Pauli-Z.
pub fn second_ion_gate() -> [[C64; 2]; 2] {
    let s = [[C64::from(1.0), C64::from(0.0)], [C64::from(0.0), C64::from_polar(1.0, PI / 2.0)]];
    let z = [[C64::from(1.0), C64::from(0.0)], [C64::from(0.0), C64::from(-1.0)]];
    let mut out = [[C64::from(0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = (0..2).map(|k| z[r][k] * s[k][c]).sum();
        }
    }
    out
}

/// Applies [`second_ion_gate`] to ion 2: `|G⟩ → |G⟩`, `|E⟩ → −i|E⟩`.
pub fn apply_phase_gates(s: &PairState) -> PairState {
    let u = second_ion_gate();
    // (first ion E) components: α = EG, η = EE; (first ion G): γ = GG, β = GE.
    let apply = |g: C64, e: C64| (u[0][0] * g + u[0][1] * e, u[1][0] * g + u[1][1] * e);
    let (alpha, eta) = apply(s.alpha, s.eta);
    let (gamma, beta) = apply(s.gamma, s.beta);
    PairState::new(alpha, beta, gamma, eta)
}

/// Bell-like resource `(|EG⟩ + |GE⟩)/√2` produced by the full pipeline.
pub fn prepare_resource(p: &PrepParams) -> PairState {
    apply_phase_gates(&pair_evolution(p, prep_time(p)))
}

/// `(t, C)` samples of the preparation on `n_steps + 1` uniform times.
pub fn prep_trajectory(p: &PrepParams, t_max: f64, n_steps: usize) -> Vec<(f64, f64)> {
    (0..=n_steps)
        .map(|k| {
            let t = t_max * k as f64 / n_steps as f64;
            let c = pair_evolution(p, t).concurrence().expect("unit-norm state");
            (t, c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unitary_propagator, ZERO};
    use ndarray::array;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: &PairState, b: &PairState, tol: f64) -> bool {
        a.to_array().iter().zip(b.to_array().iter()).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn starts_separable() {
        let p = PrepParams::new(1.3, 2.0);
        let s = pair_evolution(&p, 0.0);
        assert_eq!(s, PairState::from_real(1.0, 0.0, 0.0, 0.0));
        assert_eq!(s.concurrence().unwrap(), 0.0);
    }

    #[test]
    fn maximally_entangled_at_prep_time() {
        let p = PrepParams::new(0.8, 3.0);
        let s = pair_evolution(&p, prep_time(&p));
        let expected = PairState::new(C64::from(FRAC_1_SQRT_2), C64::new(0.0, FRAC_1_SQRT_2), ZERO, ZERO);
        assert!(close(&s, &expected, 1e-12));
        assert!((s.concurrence().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fully_swapped_at_twice_prep_time() {
        let p = PrepParams::new(1.0, 1.0);
        let s = pair_evolution(&p, 2.0 * prep_time(&p));
        assert!(close(&s, &PairState::new(ZERO, C64::new(0.0, 1.0), ZERO, ZERO), 1e-12));
        assert!(s.concurrence().unwrap() < 1e-12);
    }

    #[test]
    fn prep_time_arithmetic() {
        assert!((prep_time(&PrepParams::new(1.0, 4.0)) - PI).abs() < 1e-15);
        assert!((prep_time(&PrepParams::new(2.0, 1.0)) - PI / 16.0).abs() < 1e-15);
    }

    #[test]
    fn gates_turn_prepared_pair_into_resource() {
        let out = prepare_resource(&PrepParams::new(1.7, 0.6));
        let bell = PairState::from_real(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0);
        assert!(close(&out, &bell, 1e-12));
        assert!((out.overlap_modulus(&bell).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gates_leave_ground_pair_alone() {
        let gg = PairState::from_real(0.0, 0.0, 1.0, 0.0);
        assert_eq!(apply_phase_gates(&gg), gg);
    }

    #[test]
    fn gate_is_unitary_and_preserves_concurrence() {
        let s = PairState::new(C64::new(0.3, -0.1), C64::new(0.5, 0.2), C64::new(-0.4, 0.0), C64::new(0.1, 0.6));
        let g = apply_phase_gates(&s);
        assert!((g.norm_sq() - s.norm_sq()).abs() < 1e-14);
        assert!((g.concurrence().unwrap() - s.concurrence().unwrap()).abs() < 1e-14);
    }

    #[test]
    fn closed_form_matches_exponential_up_to_global_phase() {
        // H = −(g²/δ)(Σ₊Σ₋ ⊗ 1 + 1 ⊗ Σ₊Σ₋) − (g²/δ)(exchange), on {EG, GE}.
        let p = PrepParams::new(1.2, 2.5);
        let j = C64::from(-p.rate());
        let h = array![[j, j], [j, j]];
        for &t in &[0.0, 0.4, 1.9, 7.3] {
            let u = unitary_propagator(&h.view(), t);
            let numeric = PairState::new(u[[0, 0]], u[[1, 0]], ZERO, ZERO);
            let closed = pair_evolution(&p, t);
            assert!((numeric.overlap_modulus(&closed).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trajectory_peaks_at_prep_time() {
        let p = PrepParams::new(1.0, 2.0);
        let rows = prep_trajectory(&p, 2.0 * prep_time(&p), 200);
        assert_eq!(rows.len(), 201);
        let (t_best, c_best) = rows.iter().cloned().fold((0.0, 0.0), |acc, r| if r.1 > acc.1 { r } else { acc });
        assert!((t_best - prep_time(&p)).abs() < 1e-12);
        assert!((c_best - 1.0).abs() < 1e-12);
    }
}
