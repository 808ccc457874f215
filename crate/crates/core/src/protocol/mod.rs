//! The mock protocol, Protocol 1, Protocol 1′ and Protocol 2 as executable runs.
//!
//! Every run draws Alice's and Bob's coins from the classical stream of a [`TrialRng`] and
//! every Born-rule outcome from its quantum stream, so a run is a pure function of its seed.

mod classical;
mod engine;
mod info;
mod outcome;
mod params;
mod transcript;

use rand::seq::SliceRandom;

pub use engine::{protocol1_final_state, protocol2_final_state};
pub use info::{sample_info_string, select_info_step7prime, weight_window, InfoSelection};
pub use outcome::{ErrorTally, Outcome, OutcomeRow, PostProcessingPlan, RunStats, Status};
pub use params::{balanced_half, num_qubits, BobModel, ProtocolParams, Schedule};
pub use transcript::{
    AbortReason, BobAction, CtrlResult, ProtocolKind, PublicView, Transcript,
};

use crate::adversary::AttackSpec;
use crate::error::Result;
use crate::rng::TrialRng;
use engine::Choices;

/// Runs `kind` once.
pub fn run(kind: ProtocolKind, params: &ProtocolParams, attack: &AttackSpec, rng: &mut TrialRng) -> Result<Outcome> {
    match kind {
        ProtocolKind::Mock => run_mock(params, attack, rng),
        ProtocolKind::P1 => run_protocol1(params, attack, rng),
        ProtocolKind::P1Prime => run_protocol1_prime(params, attack, rng),
        ProtocolKind::P2 => run_protocol2(params, attack, rng),
    }
}

/// The mock protocol over `N` rounds, with the same Steps 5–7 as Protocol 1.
pub fn run_mock(params: &ProtocolParams, attack: &AttackSpec, rng: &mut TrialRng) -> Result<Outcome> {
    params.validate(ProtocolKind::Mock)?;
    let choices = Choices::draw(params.num_qubits(), &mut rng.classical);
    let quantum = engine::mock(attack, &choices, &mut rng.quantum)?;
    classical::conclude(ProtocolKind::Mock, params, attack, choices, Vec::new(), quantum, rng)
}

pub fn run_protocol1(params: &ProtocolParams, attack: &AttackSpec, rng: &mut TrialRng) -> Result<Outcome> {
    run_randomized(ProtocolKind::P1, params, attack, rng)
}

pub fn run_protocol1_prime(
    params: &ProtocolParams,
    attack: &AttackSpec,
    rng: &mut TrialRng,
) -> Result<Outcome> {
    run_randomized(ProtocolKind::P1Prime, params, attack, rng)
}

pub fn run_protocol2(params: &ProtocolParams, attack: &AttackSpec, rng: &mut TrialRng) -> Result<Outcome> {
    params.validate(ProtocolKind::P2)?;
    let choices = Choices::draw(params.num_qubits(), &mut rng.classical);
    let quantum = engine::measure_resend(
        attack,
        &choices,
        params.schedule,
        params.bob_model,
        &mut rng.quantum,
    )?;
    classical::conclude(ProtocolKind::P2, params, attack, choices, Vec::new(), quantum, rng)
}

fn run_randomized(
    kind: ProtocolKind,
    params: &ProtocolParams,
    attack: &AttackSpec,
    rng: &mut TrialRng,
) -> Result<Outcome> {
    params.validate(kind)?;
    let choices = Choices::draw(params.num_qubits(), &mut rng.classical);
    let mut order = choices.positions(BobAction::Ctrl);
    order.shuffle(&mut rng.classical);
    let quantum = engine::randomized(kind, attack, &choices, &order, &mut rng.quantum)?;
    classical::conclude(kind, params, attack, choices, order, quantum, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{cnot_forward_only, cnot_mirror, hamming_weight_attack, no_attack};
    use crate::qstate::Basis;

    fn honest(kind: ProtocolKind, params: &ProtocolParams) {
        for i in 0..50 {
            let mut rng = TrialRng::for_trial(11, i);
            let out = run(kind, params, &no_attack(), &mut rng).unwrap();
            assert_eq!(out.status, Status::Completed, "{kind} trial {i}");
            assert_eq!(out.alice_info, out.bob_info);
            assert_eq!(out.alice_info.len(), params.n);
            assert_eq!(out.stats.ctrl_z.errors + out.stats.ctrl_x.errors + out.stats.test.errors, 0);
        }
    }

    #[test]
    fn honest_runs_complete() {
        // δ = 3 leaves about 32 SIFT bits for the 8 needed
        let p = ProtocolParams::new(4, 3.0);
        honest(ProtocolKind::Mock, &p);
        honest(ProtocolKind::P1, &p);
        honest(ProtocolKind::P2, &p);
        honest(ProtocolKind::P1Prime, &p.with_epsilon(0.5));
    }

    #[test]
    fn runs_are_reproducible() {
        let p = ProtocolParams::new(4, 0.5);
        let a = run_protocol2(&p, &cnot_forward_only(), &mut TrialRng::for_trial(5, 3)).unwrap();
        let b = run_protocol2(&p, &cnot_forward_only(), &mut TrialRng::for_trial(5, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reflect_order_partitions_positions() {
        let p = ProtocolParams::new(2, 0.5);
        let out = run_protocol1(&p, &no_attack(), &mut TrialRng::for_trial(1, 0)).unwrap();
        let t = &out.transcript;
        let mut all: Vec<usize> = t.reflect_order_s.iter().chain(&t.measured_set_m).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..t.num_qubits).collect::<Vec<_>>());
    }

    #[test]
    fn mirror_is_rejected_on_protocol1() {
        let p = ProtocolParams::new(2, 0.5);
        let err = run_protocol1(&p, &cnot_mirror(), &mut TrialRng::for_trial(1, 0));
        assert!(matches!(err, Err(crate::Error::Incompatible { .. })));
    }

    #[test]
    fn counter_attack_reads_measured_weight() {
        let p = ProtocolParams::new(2, 0.0625);
        let attack = hamming_weight_attack(p.num_qubits()).unwrap();
        for i in 0..20 {
            let out = run_protocol1(&p, &attack, &mut TrialRng::for_trial(2, i)).unwrap();
            let weight: usize = out.transcript.bob_measured_bits.iter().map(|&b| b as usize).sum();
            assert_eq!(out.eve_record.probe_outcome(), Some(weight));
            assert_eq!(out.stats.ctrl_z.errors + out.stats.ctrl_x.errors, 0);
        }
    }

    #[test]
    fn forward_copy_disturbs_x_ctrl_only() {
        let p = ProtocolParams::new(4, 0.5).with_thresholds(1.0, 1.0);
        let (mut z, mut x) = (ErrorTally::default(), ErrorTally::default());
        for i in 0..40 {
            let out = run_protocol2(&p, &cnot_forward_only(), &mut TrialRng::for_trial(9, i)).unwrap();
            for r in &out.transcript.ctrl_results {
                match r.basis {
                    Basis::Z => z.record(r.is_error()),
                    Basis::X => x.record(r.is_error()),
                }
            }
        }
        assert_eq!(z.errors, 0);
        assert!(x.errors > 0);
    }
}
