mod common;

use std::f64::consts::{PI, TAU};

use anyonic_core::entangle::build_entangled_state;
use anyonic_core::phase::ExchangePhase;
use anyonic_core::stategen::{
    build_stategen_circuit, circuit_fidelity, controlled_swap_formula, gate_counts,
    local_op_formula, simulate_circuit, Gate, QuditCircuit, QuditRegister,
};
use common::tuples;
use num_complex::Complex64;

fn ph(x: f64) -> ExchangePhase {
    ExchangePhase::new(x).unwrap()
}

fn sixteen_phases() -> Vec<f64> {
    (0..16).map(|k| k as f64 * TAU / 16.0 + 0.05 * (k % 3) as f64).collect()
}

#[test]
fn prepares_the_target_state() {
    for n in 2..=5 {
        for phi in sixteen_phases() {
            let c = build_stategen_circuit(n, ph(phi)).unwrap();
            let f = circuit_fidelity(&c, ph(phi)).unwrap();
            assert!((f - 1.0).abs() < 1e-12, "N={n} φ={phi}: {f}");
        }
    }
}

#[test]
fn fidelity_is_phase_selective() {
    let c = build_stategen_circuit(3, ph(0.0)).unwrap();
    assert!(circuit_fidelity(&c, ph(PI)).unwrap() < 1e-12);
}

#[test]
fn gate_counts_follow_closed_forms() {
    for n in 2..=8 {
        let c = build_stategen_circuit(n, ph(0.3)).unwrap();
        let counts = gate_counts(&c);
        assert_eq!(counts.controlled_swaps, controlled_swap_formula(n), "N={n}");
        assert_eq!(counts.splitter_decompositions, local_op_formula(n));
        assert_eq!(counts.phase_shifts, local_op_formula(n));
        assert_eq!(counts.local(), n * (n - 1));
    }
    assert_eq!(gate_counts(&build_stategen_circuit(3, ph(0.3)).unwrap()).controlled_swaps, 7);
    assert_eq!(gate_counts(&build_stategen_circuit(5, ph(0.3)).unwrap()).controlled_swaps, 65);
}

#[test]
fn every_gate_preserves_the_norm() {
    for n in 2..=5 {
        let c = build_stategen_circuit(n, ph(1.2)).unwrap();
        let mut reg = QuditRegister::ground(n).unwrap();
        for g in c.gates() {
            reg.apply_gate(g);
            assert!((reg.norm_sqr() - 1.0).abs() < 1e-10, "{g}");
        }
    }
}

/// `(1/√(q+1)) Σ_j e^{i(j−1)φ}|j⟩` on `B[q+1]` times `|ψ_q⟩` on the lower
/// qudits, with the untouched higher qudits in their own superpositions.
fn intermediate_expected(n: usize, q: usize, phi: f64) -> Vec<Complex64> {
    let lower = build_entangled_state(&(0..q).collect::<Vec<_>>(), ph(phi)).unwrap();
    let mut out = Vec::with_capacity(n.pow(n as u32));
    for levels in tuples(n, n) {
        // levels[0] is B[N]; the last q entries are B[q]..B[1]
        let mut amp = lower.amplitude(&levels[n - q..]);
        for (pos, &l) in levels[..n - q].iter().enumerate() {
            let span = n - pos;
            amp *= if l < span {
                Complex64::cis(l as f64 * phi) / (span as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        out.push(amp);
    }
    out
}

#[test]
fn inductive_invariant_after_each_step() {
    let n = 4;
    for phi in [0.0, 0.7, PI, 2.2] {
        let c = build_stategen_circuit(n, ph(phi)).unwrap();
        for q in [2usize, 3] {
            let prefix = c.prefix(c.prefix_preparing(q).unwrap());
            let reg = simulate_circuit(&prefix, &QuditRegister::ground(n).unwrap()).unwrap();
            let want = intermediate_expected(n, q, phi);
            for (got, want) in reg.amplitudes().iter().zip(&want) {
                assert!((got - want).norm() < 1e-12, "q={q} φ={phi}");
            }
        }
    }
}

#[test]
fn dropping_a_phase_gate_breaks_the_singlet() {
    let c = build_stategen_circuit(2, ExchangePhase::FERMION).unwrap();
    let kept: Vec<Gate> = c
        .gates()
        .iter()
        .filter(|g| !matches!(g, Gate::PhaseShift { .. }))
        .copied()
        .collect();
    let broken = QuditCircuit::new(2, kept).unwrap();
    assert_eq!(circuit_fidelity(&broken, ExchangePhase::FERMION).unwrap(), 0.0);
}

#[test]
fn text_form_round_trips_for_every_size() {
    for n in 2..=6 {
        let c = build_stategen_circuit(n, ph(0.1 * n as f64)).unwrap();
        let back: QuditCircuit = c.to_string().parse().unwrap();
        assert_eq!(back.gates(), c.gates());
    }
}
