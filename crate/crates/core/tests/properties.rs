use num_complex::Complex64 as C64;
use proptest::prelude::*;

use omc_repeater::dynamics;
use omc_repeater::measurement::{project_pair, swap_bsm, BellChoice};
use omc_repeater::register::{initial_protocol_families, PairState};
use omc_repeater::ModelParams;

fn arb_pair() -> impl Strategy<Value = PairState> {
    proptest::array::uniform8(-1.0f64..1.0)
        .prop_map(|v| PairState::new(C64::new(v[0], v[1]), C64::new(v[2], v[3]), C64::new(v[4], v[5]), C64::new(v[6], v[7])))
        .prop_filter("not degenerate", |s| s.norm_sq() > 1e-3)
}

/// Amplitudes over (q1, q4, q5, q8) with level 0 = E, 1 = G.
fn product(a: &PairState, b: &PairState) -> [[[[C64; 2]; 2]; 2]; 2] {
    let amp = |s: &PairState, x: usize, y: usize| match (x, y) {
        (0, 1) => s.alpha,
        (1, 0) => s.beta,
        (1, 1) => s.gamma,
        _ => s.eta,
    };
    let mut out = [[[[C64::from(0.0); 2]; 2]; 2]; 2];
    for q1 in 0..2 {
        for q4 in 0..2 {
            for q5 in 0..2 {
                for q8 in 0..2 {
                    out[q1][q4][q5][q8] = amp(a, q1, q4) * amp(b, q5, q8);
                }
            }
        }
    }
    out
}

/// Born probability of each of the four Bell states on (4,5).
fn bell_probabilities(a: &PairState, b: &PairState) -> [f64; 4] {
    let psi = product(a, b);
    let total = a.norm_sq() * b.norm_sq();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // (EE ± GG), (EG ± GE) as coefficient matrices over (q4, q5).
    let bells = [[[h, 0.0], [0.0, h]], [[h, 0.0], [0.0, -h]], [[0.0, h], [h, 0.0]], [[0.0, h], [-h, 0.0]]];
    bells.map(|m| {
        let mut n = 0.0;
        for q1 in 0..2 {
            for q8 in 0..2 {
                let mut z = C64::from(0.0);
                for q4 in 0..2 {
                    for q5 in 0..2 {
                        z += psi[q1][q4][q5][q8] * m[q4][q5];
                    }
                }
                n += z.norm_sqr();
            }
        }
        n / total
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn swap_probabilities_are_born_probabilities(a in arb_pair(), b in arb_pair()) {
        let probs = bell_probabilities(&a, &b);
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let psi = swap_bsm(&a, &b, BellChoice::PsiEeGg).unwrap();
        let prime = swap_bsm(&a, &b, BellChoice::PsiEgGe).unwrap();
        prop_assert!((psi.prob - probs[0]).abs() < 1e-12);
        prop_assert!((prime.prob - probs[2]).abs() < 1e-12);
        prop_assert!(psi.prob + prime.prob <= 1.0 + 1e-12);
    }

    #[test]
    fn swap_outputs_are_bounded(a in arb_pair(), b in arb_pair()) {
        for bell in BellChoice::ALL {
            let s = swap_bsm(&a, &b, bell).unwrap();
            prop_assert!(s.prob >= 0.0 && s.prob <= 1.0 + 1e-12);
            if let Some(c) = s.conc {
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c));
                prop_assert!((s.state.norm_sq() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn evolution_preserves_measurement_budget(
        w in 0.2f64..6.0,
        e_p in 0.0f64..6.0,
        dw4 in -0.1f64..0.5,
        t in 0.0f64..20.0,
    ) {
        let mut p = ModelParams::degenerate(w, e_p);
        p.omega_p -= dw4;
        let traj = dynamics::evolve_auto(&p, &initial_protocol_families(), &[0.0, t]).unwrap();
        let f = traj.families.last().unwrap();
        let mut total = 0.0;
        for i in 1..=4 {
            let m = project_pair(f, i).unwrap();
            prop_assert!((m.prob - 0.25).abs() < 1e-9);
            prop_assert!(m.conc.unwrap() <= 1.0 + 1e-9);
            total += m.prob;
        }
        prop_assert!((total - 1.0).abs() < 1e-9);
    }
}
