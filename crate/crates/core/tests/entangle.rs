mod common;

use std::f64::consts::PI;

use anyonic_core::correlation::correlation_tensor;
use anyonic_core::entangle::{
    build_entangled_state, coincidence_distribution, evolve, evolve_with_dense_limit, ProcessCopies,
    SparseFockState,
};
use anyonic_core::matrix::ComplexMatrix;
use anyonic_core::phase::ExchangePhase;
use common::{apply_each_axis, entangled_vector, random_unitary, tuples};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PHASES: [f64; 7] = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI, 1.0, 2.5];

fn ph(x: f64) -> ExchangePhase {
    ExchangePhase::new(x).unwrap()
}

fn fact(n: usize) -> f64 {
    (1..=n).product::<usize>() as f64
}

fn random_inputs<R: Rng>(m: usize, n: usize, rng: &mut R) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        pool.swap(i, rng.random_range(0..=i));
    }
    let mut nu = pool[..n].to_vec();
    nu.sort();
    nu
}

#[test]
fn state_matches_dense_oracle() {
    for phi in PHASES {
        let nu = [0usize, 2, 3];
        let s = build_entangled_state(&nu, ph(phi)).unwrap();
        let oracle = entangled_vector(&nu, 4, phi);
        for (i, t) in tuples(4, 3).iter().enumerate() {
            assert!((s.amplitude(t) - oracle[i]).norm() < 1e-15);
        }
        assert_eq!(s.len(), 6);
    }
}

#[test]
fn equivalence_with_correlations() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe9);
    for trial in 0..60 {
        let n = 2 + trial % 3;
        let m = rng.random_range(n.max(2)..=8);
        let a = random_unitary(m, &mut rng);
        let nu = random_inputs(m, n, &mut rng);
        for phi in PHASES {
            let state = build_entangled_state(&nu, ph(phi)).unwrap();
            let out = evolve(&state, &ProcessCopies::identical(&a, n).unwrap()).unwrap();
            let p = coincidence_distribution(&out).unwrap();
            let gamma = correlation_tensor(&a, &nu, ph(phi)).unwrap();
            for (mu, g, _) in gamma.entries() {
                assert!((fact(n) * p.get(&mu) - g).abs() < 1e-10, "N={n} M={m} φ={phi} μ={mu:?}");
            }
        }
    }
}

#[test]
fn evolution_matches_axis_by_axis_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa1);
    for n in 2..=4 {
        let m = 5;
        let a = random_unitary(m, &mut rng);
        let nu = random_inputs(m, n, &mut rng);
        let state = build_entangled_state(&nu, ph(0.7)).unwrap();
        let out = evolve(&state, &ProcessCopies::identical(&a, n).unwrap()).unwrap();
        let oracle = apply_each_axis(&a, &entangled_vector(&nu, m, 0.7), n);
        for (i, t) in tuples(m, n).iter().enumerate() {
            assert!((out.amplitude(t) - oracle[i]).norm() < 1e-13);
        }
    }
}

#[test]
fn distinct_copies_are_applied_per_copy() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd2);
    let a = random_unitary(3, &mut rng);
    let b = random_unitary(3, &mut rng);
    let state = build_entangled_state(&[0, 2], ph(1.1)).unwrap();
    let out = evolve(&state, &ProcessCopies::new(vec![a.clone(), b.clone()]).unwrap()).unwrap();
    let s = 1.0 / 2f64.sqrt();
    for (r, q) in [(0usize, 1usize), (2, 2), (1, 0)] {
        let want = (a.get(r, 0) * b.get(q, 2)
            + num_complex::Complex64::cis(1.1) * a.get(r, 2) * b.get(q, 0))
            * s;
        assert!((out.amplitude(&[r, q]) - want).norm() < 1e-15);
    }
}

#[test]
fn sparse_and_dense_paths_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5b);
    let a = random_unitary(9, &mut rng);
    let nu = [1usize, 3, 4, 8];
    let state = build_entangled_state(&nu, ph(0.4)).unwrap();
    let procs = ProcessCopies::identical(&a, 4).unwrap();
    let dense = evolve(&state, &procs).unwrap();
    let sparse = evolve_with_dense_limit(&state, &procs, 0).unwrap();
    assert!(dense.is_dense() && !sparse.is_dense());
    assert!((sparse.norm_sqr() - 1.0).abs() < 1e-10);
    for mu in tuples(9, 4) {
        assert!((dense.amplitude(&mu) - sparse.amplitude(&mu)).norm() < 1e-14);
    }
}

#[test]
fn copy_exchange_symmetry() {
    let s0 = build_entangled_state(&[1, 4, 6], ExchangePhase::BOSON).unwrap();
    let swapped = s0.swap_copies(0, 2).unwrap();
    for (label, amp) in s0.terms() {
        assert_eq!(swapped.amplitude(&label), amp);
    }
    let s1 = build_entangled_state(&[1, 4], ExchangePhase::FERMION).unwrap();
    let swapped = s1.swap_copies(0, 1).unwrap();
    for (label, amp) in s1.terms() {
        assert_eq!(swapped.amplitude(&label), -amp);
    }
}

#[test]
fn hand_built_state_evolves_linearly() {
    let a = ComplexMatrix::beamsplitter();
    let one = SparseFockState::from_terms(2, 2, vec![(vec![0, 0], num_complex::Complex64::new(1.0, 0.0))])
        .unwrap();
    let out = evolve(&one, &ProcessCopies::identical(&a, 2).unwrap()).unwrap();
    assert!((out.norm_sqr() - 1.0).abs() < 1e-15);
    assert!((out.amplitude(&[1, 1]) + num_complex::Complex64::new(0.5, 0.0)).norm() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_preserved(seed in any::<u64>(), n in 2usize..=4, m in 4usize..=7, phi in 0.0f64..6.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_unitary(m, &mut rng);
        let nu = random_inputs(m, n, &mut rng);
        let state = build_entangled_state(&nu, ph(phi)).unwrap();
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        let out = evolve(&state, &ProcessCopies::identical(&a, n).unwrap()).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn depends_on_phase_mod_two_pi(seed in any::<u64>(), phi in 0.0f64..6.28, k in -2i32..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_unitary(4, &mut rng);
        let procs = ProcessCopies::identical(&a, 3).unwrap();
        let p = |x: f64| {
            let s = build_entangled_state(&[0, 1, 3], ph(x)).unwrap();
            coincidence_distribution(&evolve(&s, &procs).unwrap()).unwrap()
        };
        let base = p(phi);
        let shifted = p(phi + k as f64 * std::f64::consts::TAU);
        for (u, v) in base.values().iter().zip(shifted.values()) {
            prop_assert!((u - v).abs() < 1e-13);
        }
    }
}
