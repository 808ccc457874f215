//! Quantum part of each protocol: preparation, Eve's hooks, Bob's actions, Alice's checks.
//!
//! Per-qubit attacks never entangle different positions, so each position is simulated as
//! its own small dense state. Collective attacks run on one sparse global state.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{BobAction, BobModel, ProtocolKind, Schedule};
use crate::adversary::{AttackSpec, Coupling};
use crate::error::{Error, Result};
use crate::qstate::{
    Basis, BasisState, QuantumState, SparseState, StateVector, Subsystem, SubsystemLayout,
    UnitaryMatrix,
};

const SLOT: [Subsystem; 2] = [Subsystem::Probe, Subsystem::Qubit(0)];

/// Alice's and Bob's classical coin flips for every position.
#[derive(Debug, Clone)]
pub(crate) struct Choices {
    pub bases: Vec<Basis>,
    pub bits: Vec<u8>,
    pub actions: Vec<BobAction>,
}

impl Choices {
    pub fn draw<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Self {
        let mut c = Self {
            bases: Vec::with_capacity(num_qubits),
            bits: Vec::with_capacity(num_qubits),
            actions: Vec::with_capacity(num_qubits),
        };
        for _ in 0..num_qubits {
            c.bases.push(if rng.gen::<bool>() { Basis::X } else { Basis::Z });
            c.bits.push(u8::from(rng.gen::<bool>()));
            c.actions.push(if rng.gen::<bool>() { BobAction::Ctrl } else { BobAction::Sift });
        }
        c
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn states(&self) -> Vec<BasisState> {
        self.bases
            .iter()
            .zip(&self.bits)
            .map(|(&b, &x)| BasisState::new(b, x))
            .collect()
    }

    pub fn positions(&self, action: BobAction) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.actions[k] == action).collect()
    }
}

/// What the quantum phase leaves behind.
pub(crate) struct QuantumRecord {
    pub bob_bits: Vec<Option<u8>>,
    pub alice_returned: Vec<Option<u8>>,
    pub probe: PendingProbe,
}

impl QuantumRecord {
    fn new(num_qubits: usize, probe: PendingProbe) -> Self {
        Self {
            bob_bits: vec![None; num_qubits],
            alice_returned: vec![None; num_qubits],
            probe,
        }
    }
}

/// Eve's probe, still unmeasured until every announcement has been made.
pub(crate) enum PendingProbe {
    Slots(Vec<Slot>),
    Global(SparseState<f64>),
}

pub(crate) enum Slot {
    /// Already read out when Eve learned the qubit would not return.
    Measured(usize),
    Pending(StateVector<f64>),
}

impl PendingProbe {
    pub fn measure(self, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        match self {
            Self::Slots(slots) => slots
                .into_iter()
                .map(|slot| match slot {
                    Slot::Measured(o) => Ok(o),
                    Slot::Pending(mut s) => measure_probe_of(&mut s, rng),
                })
                .collect(),
            Self::Global(mut s) => {
                let factors = s.layout().probe_factors().len();
                if factors == 1 {
                    return Ok(vec![measure_probe_of(&mut s, rng)?]);
                }
                (0..factors)
                    .map(|j| s.measure(Subsystem::ProbeFactor(j), Basis::Z, rng))
                    .collect()
            }
        }
    }
}

fn measure_probe_of<S: QuantumState<f64>>(s: &mut S, rng: &mut ChaCha8Rng) -> Result<usize> {
    if s.layout().probe_dim() == 1 {
        Ok(0)
    } else {
        s.measure_probe(rng)
    }
}

fn incompatible(attack: &AttackSpec, protocol: ProtocolKind, reason: &str) -> Error {
    Error::Incompatible {
        attack: attack.name.clone(),
        protocol: protocol.name().to_string(),
        reason: reason.to_string(),
    }
}

fn slot_state(attack: &AttackSpec, state: BasisState, register: usize) -> Result<StateVector<f64>> {
    StateVector::prepare(SubsystemLayout::new(attack.probe_dim(), 1, register)?, 0, &[state])
}

fn all_qubits(num_qubits: usize) -> Vec<Subsystem> {
    std::iter::once(Subsystem::Probe)
        .chain((0..num_qubits).map(Subsystem::Qubit))
        .collect()
}

/// Mock protocol: one round per position, SIFT qubits are not returned.
pub(crate) fn mock(attack: &AttackSpec, ch: &Choices, rng: &mut ChaCha8Rng) -> Result<QuantumRecord> {
    let Coupling::PerQubit { forward, backward } = &attack.coupling else {
        return Err(incompatible(attack, ProtocolKind::Mock, "the mock protocol runs round by round"));
    };
    let mut slots = Vec::with_capacity(ch.len());
    let mut rec = QuantumRecord::new(ch.len(), PendingProbe::Slots(Vec::new()));
    for (k, state) in ch.states().into_iter().enumerate() {
        let mut s = slot_state(attack, state, 0)?;
        forward.apply(&mut s, &SLOT)?;
        match ch.actions[k] {
            BobAction::Sift => {
                rec.bob_bits[k] = Some(s.measure_qubit(0, Basis::Z, rng)?);
                // Eve is told the qubit will not come back
                slots.push(Slot::Measured(measure_probe_of(&mut s, rng)?));
            }
            BobAction::Ctrl => {
                backward.apply(&mut s, &SLOT)?;
                rec.alice_returned[k] = Some(s.measure_qubit(0, ch.bases[k], rng)?);
                slots.push(Slot::Pending(s));
            }
        }
    }
    rec.probe = PendingProbe::Slots(slots);
    Ok(rec)
}

/// Protocol 1 family: Bob measures `s̄` and reflects the rest in the order `reflect_order`.
pub(crate) fn randomized(
    kind: ProtocolKind,
    attack: &AttackSpec,
    ch: &Choices,
    reflect_order: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<QuantumRecord> {
    let n = ch.len();
    let measured = ch.positions(BobAction::Sift);
    match &attack.coupling {
        Coupling::PerQubit { forward, backward } => {
            if !backward.is_identity() {
                return Err(incompatible(
                    attack,
                    kind,
                    "a per-qubit backward hook needs a per-position return signal, \
                     but reflected qubits come back reordered",
                ));
            }
            let mut states = Vec::with_capacity(n);
            for state in ch.states() {
                let mut s = slot_state(attack, state, 0)?;
                forward.apply(&mut s, &SLOT)?;
                states.push(s);
            }
            let mut rec = QuantumRecord::new(n, PendingProbe::Slots(Vec::new()));
            for &k in &measured {
                rec.bob_bits[k] = Some(states[k].measure_qubit(0, Basis::Z, rng)?);
            }
            for &k in reflect_order {
                rec.alice_returned[k] = Some(states[k].measure_qubit(0, ch.bases[k], rng)?);
            }
            rec.probe = PendingProbe::Slots(states.into_iter().map(Slot::Pending).collect());
            Ok(rec)
        }
        Coupling::Parallel {
            num_qubits,
            forward,
            backward,
        } => {
            if *num_qubits != n {
                return Err(Error::Dimension(format!(
                    "attack built for {num_qubits} qubits, protocol sends {n}"
                )));
            }
            let layout = SubsystemLayout::new(attack.probe_dim(), n, 0)?;
            let mut s = SparseState::prepare(layout, 0, &ch.states())?;
            forward.apply(&mut s, &all_qubits(n))?;
            let mut rec = QuantumRecord::new(n, PendingProbe::Slots(Vec::new()));
            for &k in &measured {
                rec.bob_bits[k] = Some(s.measure_qubit(k, Basis::Z, rng)?);
            }
            let block: Vec<Subsystem> = std::iter::once(Subsystem::Probe)
                .chain(reflect_order.iter().map(|&k| Subsystem::Qubit(k)))
                .collect();
            backward(reflect_order.len())?.apply(&mut s, &block)?;
            for &k in reflect_order {
                rec.alice_returned[k] = Some(s.measure_qubit(k, ch.bases[k], rng)?);
            }
            rec.probe = PendingProbe::Global(s);
            Ok(rec)
        }
        Coupling::Sequential { .. } => Err(incompatible(
            attack,
            kind,
            "the reordered return has no per-qubit interleaving",
        )),
    }
}

/// Protocol 2: Bob measures and resends SIFT qubits, reflects CTRL qubits.
pub(crate) fn measure_resend(
    attack: &AttackSpec,
    ch: &Choices,
    schedule: Schedule,
    model: BobModel,
    rng: &mut ChaCha8Rng,
) -> Result<QuantumRecord> {
    let n = ch.len();
    match (&attack.coupling, schedule) {
        (Coupling::PerQubit { forward, backward }, Schedule::Parallel) => {
            let mut rec = QuantumRecord::new(n, PendingProbe::Slots(Vec::new()));
            let mut slots = Vec::with_capacity(n);
            for (k, state) in ch.states().into_iter().enumerate() {
                let sift = ch.actions[k] == BobAction::Sift;
                let register = usize::from(sift && model == BobModel::Register);
                let mut s = slot_state(attack, state, register)?;
                forward.apply(&mut s, &SLOT)?;
                let immediate = if sift {
                    bob_acts(&mut s, 0, (register == 1).then_some(0), model, rng)?
                } else {
                    None
                };
                backward.apply(&mut s, &SLOT)?;
                rec.alice_returned[k] = Some(s.measure_qubit(0, ch.bases[k], rng)?);
                rec.bob_bits[k] = match (sift, immediate) {
                    (false, _) => None,
                    (true, Some(b)) => Some(b),
                    (true, None) => Some(s.measure(Subsystem::Bob(0), Basis::Z, rng)? as u8),
                };
                slots.push(Slot::Pending(s));
            }
            rec.probe = PendingProbe::Slots(slots);
            Ok(rec)
        }
        (Coupling::PerQubit { .. }, Schedule::Sequential) => {
            let seq = attack.individual_as_sequential(n)?;
            measure_resend(&seq, ch, schedule, model, rng)
        }
        (Coupling::Parallel { .. }, Schedule::Sequential) => {
            let seq = attack.parallel_as_sequential()?;
            measure_resend(&seq, ch, schedule, model, rng)
        }
        (Coupling::Parallel { .. }, Schedule::Parallel) | (Coupling::Sequential { .. }, _) => {
            let sift = ch.positions(BobAction::Sift);
            let register = if model == BobModel::Register { sift.len() } else { 0 };
            let mut s = global_state(attack, n, register, &ch.states())?;
            let mut register_of = vec![None; n];
            for (j, &k) in sift.iter().enumerate() {
                if model == BobModel::Register {
                    register_of[k] = Some(j);
                }
            }
            let mut rec = QuantumRecord::new(n, PendingProbe::Slots(Vec::new()));
            let mut immediate = vec![None; n];
            run_interleaved(attack, &mut s, n, |s, k| {
                if ch.actions[k] == BobAction::Sift {
                    immediate[k] = bob_acts(s, k, register_of[k], model, rng)?;
                }
                Ok(())
            })?;
            for k in 0..n {
                rec.alice_returned[k] = Some(s.measure_qubit(k, ch.bases[k], rng)?);
            }
            for &k in &sift {
                rec.bob_bits[k] = match (immediate[k], register_of[k]) {
                    (Some(b), _) => Some(b),
                    (None, Some(j)) => Some(s.measure(Subsystem::Bob(j), Basis::Z, rng)? as u8),
                    (None, None) => unreachable!("either measured or copied"),
                };
            }
            rec.probe = PendingProbe::Global(s);
            Ok(rec)
        }
    }
}

fn global_state(
    attack: &AttackSpec,
    num_qubits: usize,
    register: usize,
    states: &[BasisState],
) -> Result<SparseState<f64>> {
    let layout = match &attack.coupling {
        Coupling::Sequential {
            num_qubits: nq,
            probe_factors,
            ..
        } => {
            if *nq != num_qubits {
                return Err(Error::Dimension(format!(
                    "attack built for {nq} qubits, protocol sends {num_qubits}"
                )));
            }
            SubsystemLayout::with_probe_factors(probe_factors.clone(), num_qubits, register)?
        }
        Coupling::Parallel { num_qubits: nq, .. } if *nq != num_qubits => {
            return Err(Error::Dimension(format!(
                "attack built for {nq} qubits, protocol sends {num_qubits}"
            )))
        }
        _ => SubsystemLayout::new(attack.probe_dim(), num_qubits, register)?,
    };
    SparseState::prepare(layout, 0, states)
}

/// Runs Eve's unitaries around Bob's per-qubit action `bob(state, k)`.
fn run_interleaved<S: QuantumState<f64>>(
    attack: &AttackSpec,
    s: &mut S,
    num_qubits: usize,
    mut bob: impl FnMut(&mut S, usize) -> Result<()>,
) -> Result<()> {
    match &attack.coupling {
        Coupling::Parallel {
            forward, backward, ..
        } => {
            let all = all_qubits(num_qubits);
            forward.apply(s, &all)?;
            for k in 0..num_qubits {
                bob(s, k)?;
            }
            backward(num_qubits)?.apply(s, &all)
        }
        Coupling::Sequential { steps, .. } => {
            for (k, step) in steps.iter().enumerate() {
                for gate in step {
                    gate.op.apply(s, &gate.targets)?;
                }
                if k < num_qubits {
                    bob(s, k)?;
                }
            }
            Ok(())
        }
        Coupling::PerQubit { forward, backward } => {
            for k in 0..num_qubits {
                let pair = [Subsystem::ProbeFactor(k), Subsystem::Qubit(k)];
                forward.apply(s, &pair)?;
                bob(s, k)?;
                backward.apply(s, &pair)?;
            }
            Ok(())
        }
    }
}

/// Bob's measure-resend on qubit `k`: a copy into register qubit `register`, or an
/// immediate Z measurement (returned).
fn bob_acts<S: QuantumState<f64>>(
    s: &mut S,
    k: usize,
    register: Option<usize>,
    model: BobModel,
    rng: &mut ChaCha8Rng,
) -> Result<Option<u8>> {
    match (model, register) {
        (BobModel::Register, Some(j)) => {
            s.apply_unitary(&UnitaryMatrix::cnot(), &[Subsystem::Qubit(k), Subsystem::Bob(j)])?;
            Ok(None)
        }
        _ => Ok(Some(s.measure_qubit(k, Basis::Z, rng)?)),
    }
}

/// Protocol-2 global state after the attack with Bob as the register unitary `M_m` and
/// nothing measured: `Σ_i c_i |F_i⟩|i⟩|i_m⟩` for a computational input.
///
/// `sift[k]` marks the positions in `m`. Per-qubit attacks are lifted to one probe factor per
/// qubit.
pub fn protocol2_final_state(
    attack: &AttackSpec,
    inputs: &[BasisState],
    sift: &[bool],
) -> Result<SparseState<f64>> {
    let n = inputs.len();
    if sift.len() != n {
        return Err(Error::Config("sift mask length differs from input length".into()));
    }
    let lifted;
    let attack = match attack.coupling {
        Coupling::PerQubit { .. } => {
            lifted = attack.individual_as_sequential(n)?;
            &lifted
        }
        _ => attack,
    };
    let m: Vec<usize> = (0..n).filter(|&k| sift[k]).collect();
    let mut s = global_state(attack, n, m.len(), inputs)?;
    let mut j = 0;
    run_interleaved(attack, &mut s, n, |s, k| {
        if sift[k] {
            s.apply_unitary(&UnitaryMatrix::cnot(), &[Subsystem::Qubit(k), Subsystem::Bob(j)])?;
            j += 1;
        }
        Ok(())
    })?;
    Ok(s)
}

/// Protocol-1 global state after `U_F` with Bob's measurement kept coherent:
/// the reflected block is `reflect_order`, everything else counts as measured.
pub fn protocol1_final_state(
    attack: &AttackSpec,
    inputs: &[BasisState],
    reflect_order: &[usize],
) -> Result<SparseState<f64>> {
    let n = inputs.len();
    let Coupling::Parallel {
        forward, backward, ..
    } = &attack.coupling
    else {
        return Err(Error::Config(format!("`{}` is not a collective attack", attack.name)));
    };
    let mut s = global_state(attack, n, 0, inputs)?;
    forward.apply(&mut s, &all_qubits(n))?;
    let block: Vec<Subsystem> = std::iter::once(Subsystem::Probe)
        .chain(reflect_order.iter().map(|&k| Subsystem::Qubit(k)))
        .collect();
    backward(reflect_order.len())?.apply(&mut s, &block)?;
    Ok(s)
}
