//! Cross-checks against nalgebra's matrix exponential and Hermitian
//! eigensolver.

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

use omc_repeater::dynamics;
use omc_repeater::linalg::unitary_propagator;
use omc_repeater::register::initial_protocol_families;
use omc_repeater::ModelParams;

fn to_na(m: &Array2<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[[r, c]])
}

fn max_diff(a: &Array2<C64>, b: &DMatrix<C64>) -> f64 {
    a.indexed_iter().map(|((r, c), z)| (z - b[(r, c)]).norm()).fold(0.0, f64::max)
}

fn hermitian(n: usize, v: &[f64]) -> Array2<C64> {
    let mut m = Array2::zeros((n, n));
    let mut k = 0;
    for r in 0..n {
        m[[r, r]] = C64::from(v[k]);
        k += 1;
        for c in r + 1..n {
            let z = C64::new(v[k], v[k + 1]);
            k += 2;
            m[[r, c]] = z;
            m[[c, r]] = z.conj();
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagator_matches_nalgebra_exp(v in proptest::collection::vec(-3.0f64..3.0, 25), t in 0.0f64..5.0) {
        let h = hermitian(5, &v);
        let ours = unitary_propagator(&h.view(), t);
        let theirs = (to_na(&h) * C64::new(0.0, -t)).exp();
        prop_assert!(max_diff(&ours, &theirs) < 1e-10);
    }
}

#[test]
fn constant_generator_matches_spectral_propagator() {
    for (w, e_p) in [(0.4, 0.5), (4.0, 0.5), (0.4, 5.0), (2.0, 0.0)] {
        let p = ModelParams::degenerate(w, e_p);
        let s = to_na(&dynamics::s_matrix(&p, 0.0).unwrap());
        let eig = SymmetricEigen::new(s);
        let grid = [0.0, 0.7, 3.1, 12.5, 50.0];
        let traj = dynamics::evolve_const(&p, &initial_protocol_families(), &grid).unwrap();
        for (&t, f) in grid.iter().zip(&traj.families) {
            let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -l * t)));
            let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
            let expect = u * C64::from(0.5);
            assert!(max_diff(&f.m, &expect) < 1e-10, "w = {w}, E_P = {e_p}, t = {t}");
        }
    }
}

#[test]
fn integrator_matches_spectral_propagator() {
    // Equal frequencies, but forced through the step-controlled integrator.
    let p = ModelParams::degenerate(0.4, 0.5);
    let s = to_na(&dynamics::s_matrix(&p, 0.0).unwrap());
    let eig = SymmetricEigen::new(s);
    let grid = [0.0, 5.0, 20.0];
    let traj = dynamics::evolve(&p, &initial_protocol_families(), &grid).unwrap();
    for (&t, f) in grid.iter().zip(&traj.families) {
        let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -l * t)));
        let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint() * C64::from(0.5);
        assert!(max_diff(&f.m, &u) < 1e-8, "t = {t}");
    }
}
