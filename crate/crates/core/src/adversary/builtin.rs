use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use super::spec::{Announcement, AttackSpec, Coupling, Operator, Readout};
use crate::error::{Error, Result};
use crate::qstate::{BasisPermutation, UnitaryMatrix};

const COPY_INPUTS: [Announcement; 4] = [
    Announcement::ReturnSignal,
    Announcement::AliceBases,
    Announcement::BobActions,
    Announcement::InfoIndices,
];

/// Identity everywhere with a one-dimensional probe.
pub fn no_attack() -> AttackSpec {
    AttackSpec::new(
        "no_attack",
        1,
        Coupling::PerQubit {
            forward: Operator::Identity,
            backward: Operator::Identity,
        },
        Readout::Nothing,
        Vec::new(),
    )
    .expect("identity attack is well formed")
}

/// cNOT from the transit qubit into a fresh probe qubit on the way in, and again on the
/// way back.
pub fn cnot_mirror() -> AttackSpec {
    per_qubit("cnot_mirror", Operator::Matrix(probe_cnot()), Operator::Matrix(probe_cnot()))
}

/// cNOT into a fresh probe qubit on the way in only.
pub fn cnot_forward_only() -> AttackSpec {
    per_qubit("cnot_forward_only", Operator::Matrix(probe_cnot()), Operator::Identity)
}

/// Eve measures each transit qubit in Z and resends it. The measurement is kept coherent
/// as a copy into her probe, which has the same effect on the traffic.
pub fn intercept_resend_z() -> AttackSpec {
    per_qubit("intercept_resend_z", Operator::Matrix(probe_cnot()), Operator::Identity)
}

/// Controlled rotation of a fresh probe qubit by `theta`, controlled by the transit qubit.
pub fn rotation_probe(theta: f64) -> Result<AttackSpec> {
    if !(0.0..=FRAC_PI_2 + 1e-12).contains(&theta) {
        return Err(Error::Domain(format!("rotation angle {theta} outside [0, π/2]")));
    }
    let forward = if theta == 0.0 {
        Operator::Identity
    } else {
        Operator::Matrix(probe_controlled(&UnitaryMatrix::rotation(theta)))
    };
    Ok(per_qubit("rotation_probe", forward, Operator::Identity).with_parameter("theta", theta))
}

/// Counter attack on `num_qubits` qubits: `U_E` adds `|i|` to an `(N+1)`-dim probe,
/// `U_F` subtracts the weight of the returned block, both modulo N+1.
pub fn hamming_weight_attack(num_qubits: usize) -> Result<AttackSpec> {
    if num_qubits == 0 || num_qubits >= usize::BITS as usize - 1 {
        return Err(Error::Config(format!(
            "hamming_weight couples all {num_qubits} qubits to one probe and is simulated on a global \
             state indexed by a machine word, so it needs 1 <= N <= {}; in practice the sparse support \
             cap limits it to about N = 30",
            usize::BITS - 2
        )));
    }
    let d = num_qubits + 1;
    let forward = BasisPermutation::probe_shift(d, num_qubits, |bits| bits.count_ones() as i64);
    let backward = move |r: usize| -> Result<Operator> {
        if r > num_qubits {
            return Err(Error::Dimension(format!(
                "returned block of {r} qubits exceeds {num_qubits}"
            )));
        }
        Ok(Operator::Permutation(BasisPermutation::probe_shift(d, r, |bits| {
            -(bits.count_ones() as i64)
        })))
    };
    Ok(AttackSpec::new(
        "hamming_weight",
        d,
        Coupling::Parallel {
            num_qubits,
            forward: Operator::Permutation(forward),
            backward: Arc::new(backward),
        },
        Readout::WeightCounter,
        vec![Announcement::ReflectOrder, Announcement::TestValues],
    )?
    .with_parameter("num_qubits", num_qubits as f64))
}

fn per_qubit(name: &str, forward: Operator, backward: Operator) -> AttackSpec {
    AttackSpec::new(
        name,
        2,
        Coupling::PerQubit { forward, backward },
        Readout::CopyPerQubit,
        COPY_INPUTS.to_vec(),
    )
    .expect("built-in per-qubit attack is well formed")
}

/// cNOT on `probe ⊗ qubit` with the qubit as control.
fn probe_cnot() -> UnitaryMatrix<f64> {
    probe_controlled(&UnitaryMatrix::pauli_x())
}

/// `|p, q⟩ ↦ |u^q p, q⟩` for a 2×2 `u`, on the target order (probe, qubit).
fn probe_controlled(u: &UnitaryMatrix<f64>) -> UnitaryMatrix<f64> {
    // local index = 2·p + q
    let zero = num_complex::Complex::new(0.0, 0.0);
    let mut m = vec![zero; 16];
    for p in 0..2 {
        for p2 in 0..2 {
            m[(2 * p2) * 4 + 2 * p] = if p == p2 { num_complex::Complex::new(1.0, 0.0) } else { zero };
            m[(2 * p2 + 1) * 4 + 2 * p + 1] = u.get(p2, p);
        }
    }
    UnitaryMatrix::new(4, m).expect("controlled unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{BasisState, QuantumState, StateVector, Subsystem, SubsystemLayout};
    use num_complex::Complex;

    fn run(op: &Operator, probe: usize, q: BasisState) -> StateVector<f64> {
        let mut s = StateVector::prepare(SubsystemLayout::new(2, 1, 0).unwrap(), probe, &[q]).unwrap();
        op.apply(&mut s, &[Subsystem::Probe, Subsystem::Qubit(0)]).unwrap();
        s
    }

    #[test]
    fn probe_cnot_copies_the_qubit() {
        let op = Operator::Matrix(probe_cnot());
        let s = run(&op, 0, BasisState::Z1);
        // |probe=1, q=1⟩ = index 3
        assert!((s.amplitude(3) - Complex::new(1.0, 0.0)).norm() < 1e-12);
        let s = run(&op, 1, BasisState::Z0);
        assert!((s.amplitude(2) - Complex::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn full_rotation_is_the_cnot() {
        let Coupling::PerQubit { forward, .. } = rotation_probe(FRAC_PI_2).unwrap().coupling else {
            panic!()
        };
        let Operator::Matrix(u) = forward else { panic!() };
        // R(π/2) = [[0,-1],[1,0]]: same copy pattern as the cNOT up to the sign on |1,1⟩→|0,1⟩
        let c = probe_cnot();
        for r in 0..4 {
            for col in 0..4 {
                assert!((u.get(r, col).norm() - c.get(r, col).norm()).abs() < 1e-12);
            }
        }
        assert!(matches!(
            rotation_probe(0.0).unwrap().coupling,
            Coupling::PerQubit {
                forward: Operator::Identity,
                ..
            }
        ));
        assert!(rotation_probe(2.0).is_err());
    }

    #[test]
    fn counter_attack_example() {
        // U_E|0⟩|11⟩ = |2⟩|11⟩ and U_F|2⟩|11⟩ = |0⟩|11⟩, N = 2
        let attack = hamming_weight_attack(2).unwrap();
        let Coupling::Parallel { forward, backward, .. } = &attack.coupling else { panic!() };
        let layout = SubsystemLayout::new(3, 2, 0).unwrap();
        let mut s = StateVector::prepare(layout, 0, &[BasisState::Z1, BasisState::Z1]).unwrap();
        let all = [Subsystem::Probe, Subsystem::Qubit(0), Subsystem::Qubit(1)];
        forward.apply(&mut s, &all).unwrap();
        assert!((s.amplitude(2 * 4 + 3).norm() - 1.0).abs() < 1e-12);
        backward(2).unwrap().apply(&mut s, &all).unwrap();
        assert!((s.amplitude(3).norm() - 1.0).abs() < 1e-12);
        assert!(backward(3).is_err());
    }

    #[test]
    fn no_attack_has_trivial_probe() {
        let a = no_attack();
        assert_eq!(a.probe_dim(), 1);
        assert_eq!(a.readout, Readout::Nothing);
    }
}
