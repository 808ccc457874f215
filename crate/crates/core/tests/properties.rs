use std::collections::BTreeMap;

use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use sqkd_core::analysis::JointDistribution;
use sqkd_core::protocol::{select_info_step7prime, weight_window};
use sqkd_core::qstate::{Basis, BasisPermutation, BasisState, QuantumState, Subsystem, SubsystemLayout};
use sqkd_core::{SparseState, StateVector, UnitaryMatrix};

#[derive(Debug, Clone)]
enum Gate {
    H(usize),
    Cnot(usize, usize),
    ProbeRotation(usize, f64),
    ProbeShift(usize),
}

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0..n).prop_map(Gate::H),
        (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| Gate::Cnot(a, b)),
        (0..n, 0.0..6.3f64).prop_map(|(q, t)| Gate::ProbeRotation(q, t)),
        (0..n).prop_map(Gate::ProbeShift),
    ]
}

fn circuit() -> impl Strategy<Value = (usize, Vec<(bool, u8)>, Vec<Gate>)> {
    (2usize..=4).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((any::<bool>(), 0u8..2), n),
            prop::collection::vec(gate(n), 0..12),
        )
    })
}

/// Probe of dimension 2 (so the rotation gate applies) plus the transit qubits.
fn run<S: QuantumState<f64>>(n: usize, inputs: &[(bool, u8)], gates: &[Gate]) -> S {
    let layout = SubsystemLayout::new(2, n, 0).unwrap();
    let qubits: Vec<BasisState> = inputs
        .iter()
        .map(|&(x, b)| BasisState::new(if x { Basis::X } else { Basis::Z }, b))
        .collect();
    let mut s = S::prepare(layout, 0, &qubits).unwrap();
    for g in gates {
        match *g {
            Gate::H(q) => s.apply_unitary(&UnitaryMatrix::hadamard(), &[Subsystem::Qubit(q)]).unwrap(),
            Gate::Cnot(a, b) => s
                .apply_unitary(&UnitaryMatrix::cnot(), &[Subsystem::Qubit(a), Subsystem::Qubit(b)])
                .unwrap(),
            Gate::ProbeRotation(q, t) => s
                .apply_unitary(&UnitaryMatrix::controlled_rotation(t), &[Subsystem::Qubit(q), Subsystem::Probe])
                .unwrap(),
            Gate::ProbeShift(q) => {
                let shift = BasisPermutation::checked(4, |j| j ^ ((j & 1) << 1)).unwrap();
                s.permute_targets(&[Subsystem::Probe, Subsystem::Qubit(q)], &shift).unwrap()
            }
        }
    }
    s
}

fn as_map(entries: Vec<(usize, Complex<f64>)>) -> BTreeMap<usize, Complex<f64>> {
    entries.into_iter().filter(|(_, a)| a.norm() > 1e-14).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dense_and_sparse_agree((n, inputs, gates) in circuit()) {
        let d: StateVector = run(n, &inputs, &gates);
        let s: SparseState = run(n, &inputs, &gates);
        let (a, b) = (as_map(d.entries()), as_map(s.entries()));
        for k in a.keys().chain(b.keys()) {
            let diff = a.get(k).copied().unwrap_or_default() - b.get(k).copied().unwrap_or_default();
            prop_assert!(diff.norm() < 1e-12);
        }
    }

    #[test]
    fn unitaries_preserve_norm((n, inputs, gates) in circuit()) {
        let d: StateVector = run(n, &inputs, &gates);
        prop_assert!((d.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outcome_probabilities_are_complete((n, inputs, gates) in circuit(), target in 0usize..4, x in any::<bool>()) {
        let s: SparseState = run(n, &inputs, &gates);
        let sub = Subsystem::Qubit(target % n);
        let p = s.probabilities(sub, if x { Basis::X } else { Basis::Z }).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&v| v >= -1e-15));
        let probe = s.probabilities(Subsystem::Probe, Basis::Z).unwrap();
        prop_assert!((probe.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn self_inverse_gates((n, inputs, gates) in circuit(), a in 0usize..4, b in 0usize..4) {
        let before: StateVector = run(n, &inputs, &gates);
        let mut after = before.clone();
        let (a, b) = (a % n, b % n);
        after.apply_unitary(&UnitaryMatrix::hadamard(), &[Subsystem::Qubit(a)]).unwrap();
        after.apply_unitary(&UnitaryMatrix::hadamard(), &[Subsystem::Qubit(a)]).unwrap();
        if a != b {
            let t = [Subsystem::Qubit(a), Subsystem::Qubit(b)];
            after.apply_unitary(&UnitaryMatrix::cnot(), &t).unwrap();
            after.apply_unitary(&UnitaryMatrix::cnot(), &t).unwrap();
        }
        for (x, y) in before.amplitudes().iter().zip(after.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn permutations_move_amplitudes_without_changing_them((n, inputs, gates) in circuit(), shift in 1usize..64) {
        let s: StateVector = run(n, &inputs, &gates);
        let dim = s.dim();
        let mut p = s.clone();
        p.apply_basis_permutation(&|j| (j + shift) % dim).unwrap();
        let mut before: Vec<(i64, i64)> = s.amplitudes().iter().map(|a| ((a.re * 1e9).round() as i64, (a.im * 1e9).round() as i64)).collect();
        let mut after: Vec<(i64, i64)> = p.amplitudes().iter().map(|a| ((a.re * 1e9).round() as i64, (a.im * 1e9).round() as i64)).collect();
        before.sort();
        after.sort();
        prop_assert_eq!(before, after);
        for j in 0..dim {
            prop_assert_eq!(p.amplitude((j + shift) % dim), s.amplitude(j));
        }
    }

    #[test]
    fn mutual_information_is_symmetric_and_nonnegative(weights in prop::collection::vec(0u32..20, 12)) {
        prop_assume!(weights.iter().any(|&w| w > 0));
        let total: u32 = weights.iter().sum();
        let table: Vec<f64> = weights.iter().map(|&w| w as f64 / total as f64).collect();
        let d = JointDistribution::new(vec![3, 4], vec!["A".into(), "B".into()], table).unwrap();
        let ab = d.mutual_information(&[0], &[1]).unwrap();
        let ba = d.mutual_information(&[1], &[0]).unwrap();
        prop_assert!(ab >= -1e-12);
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ab <= d.entropy_of(&[0]).unwrap().min(d.entropy_of(&[1]).unwrap()) + 1e-12);
    }

    #[test]
    fn balanced_selection_respects_the_window(v in prop::collection::vec(0u8..2, 4..40), half_n in 1usize..4, eps in 0.0..1.0f64, seed in any::<u64>()) {
        let n = 2 * half_n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Ok(sel) = select_info_step7prime(&v, n, eps, &mut rng) {
            let (lo, hi) = weight_window(n, eps);
            let w = sel.y.iter().filter(|&&b| b == 1).count();
            prop_assert!(lo <= w && w <= hi);
            prop_assert_eq!(sel.q.len(), n);
            let mut distinct = sel.q.clone();
            distinct.sort();
            distinct.dedup();
            prop_assert_eq!(distinct.len(), n);
            // q lies inside E and v at q spells y
            for (j, &qj) in sel.q.iter().enumerate() {
                prop_assert!(sel.e_indices.contains(&qj));
                prop_assert_eq!(v[qj], sel.y[j]);
            }
            let e: Vec<u8> = sel.e_indices.iter().map(|&k| v[k]).collect();
            prop_assert_eq!(e.iter().filter(|&&b| b == 0).count(), e.iter().filter(|&&b| b == 1).count());
        }
    }
}

#[test]
fn hadamard_then_z_measurement_is_a_fair_coin() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let layout = SubsystemLayout::new(1, 1, 0).unwrap();
    let mut counts = [0f64; 2];
    let trials = 20_000;
    for _ in 0..trials {
        let mut s = StateVector::prepare(layout.clone(), 0, &[BasisState::new(Basis::Z, 0)]).unwrap();
        s.apply_unitary(&UnitaryMatrix::hadamard(), &[Subsystem::Qubit(0)]).unwrap();
        counts[s.measure_qubit(0, Basis::Z, &mut rng).unwrap() as usize] += 1.0;
    }
    let e = trials as f64 / 2.0;
    let stat: f64 = counts.iter().map(|c| (c - e).powi(2) / e).sum();
    let p = 1.0 - ChiSquared::new(1.0).unwrap().cdf(stat);
    assert!(p > 0.001, "chi-square p = {p}");
}
