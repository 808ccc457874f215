//! Steps 4–7: announcements, CTRL and TEST checks, INFO selection, Eve's readout.

use rand::seq::index;

use super::engine::{Choices, QuantumRecord};
use super::info::select_info_step7prime;
use super::outcome::{Outcome, RunStats, Status};
use super::{AbortReason, BobAction, CtrlResult, ProtocolKind, ProtocolParams, Transcript};
use crate::adversary::{read_out, AttackSpec};
use crate::error::Result;
use crate::qstate::Basis;
use crate::rng::TrialRng;

pub(crate) fn conclude(
    kind: ProtocolKind,
    params: &ProtocolParams,
    attack: &AttackSpec,
    choices: Choices,
    reflect_order: Vec<usize>,
    quantum: QuantumRecord,
    rng: &mut TrialRng,
) -> Result<Outcome> {
    let num = choices.len();
    let mut t = Transcript::new(kind, num);
    let measured = choices.positions(BobAction::Sift);
    t.bob_measured_bits = measured
        .iter()
        .map(|&k| quantum.bob_bits[k].expect("Bob measured every SIFT position"))
        .collect();
    t.measured_set_m = measured;
    t.reflect_order_s = reflect_order;
    t.alice_bases = choices.bases;
    t.alice_bits = choices.bits;
    t.bob_actions = choices.actions;

    let mut stats = RunStats::default();
    for k in 0..num {
        if t.bob_actions[k] != BobAction::Ctrl {
            continue;
        }
        let r = CtrlResult {
            position: k,
            basis: t.alice_bases[k],
            sent: t.alice_bits[k],
            received: quantum.alice_returned[k].expect("Alice measured every CTRL qubit"),
        };
        match r.basis {
            Basis::Z => stats.ctrl_z.record(r.is_error()),
            Basis::X => stats.ctrl_x.record(r.is_error()),
        }
        t.ctrl_results.push(r);
    }

    let status = select(kind, params, &mut t, &quantum, &mut stats, rng);
    if let Status::Aborted(reason) = status {
        t.abort = Some(reason);
    }

    // Eve reads her probe only now, with the complete public record in hand.
    let outcomes = quantum.probe.measure(&mut rng.quantum)?;
    let eve_record = read_out(attack.readout, outcomes, &t.public_view());

    let (alice_info, bob_info) = if status.is_completed() {
        let bob: Vec<u8> = t
            .info_positions()
            .iter()
            .map(|&k| quantum.bob_bits[k].expect("INFO bits are SIFT bits"))
            .collect();
        (t.info_string_y.clone(), bob)
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(Outcome {
        status,
        alice_info,
        bob_info,
        transcript: t,
        eve_record,
        stats,
        seed: rng.seed(),
    })
}

/// Steps 5–7; fills the transcript as announcements are made.
fn select(
    kind: ProtocolKind,
    params: &ProtocolParams,
    t: &mut Transcript,
    quantum: &QuantumRecord,
    stats: &mut RunStats,
    rng: &mut TrialRng,
) -> Status {
    let n = params.n;
    if stats.ctrl_fails(params.p_ctrl_threshold) {
        return Status::Aborted(AbortReason::CtrlErrorRate);
    }

    let sift = t.sift_positions();
    if sift.len() < n {
        return Status::Aborted(AbortReason::InsufficientBalancedBits);
    }
    let mut chosen = index::sample(&mut rng.classical, sift.len(), n).into_vec();
    chosen.sort_unstable();
    t.test_indices = chosen.iter().map(|&j| sift[j]).collect();
    t.test_values_bob = t
        .test_indices
        .iter()
        .map(|&k| quantum.bob_bits[k].expect("TEST bits are SIFT bits"))
        .collect();
    for (&k, &b) in t.test_indices.iter().zip(&t.test_values_bob) {
        stats.test.record(t.alice_bits[k] != b);
    }
    if stats.test_fails(params.p_test_threshold) {
        return Status::Aborted(AbortReason::TestErrorRate);
    }

    t.sift_positions_v = sift
        .into_iter()
        .filter(|k| t.test_indices.binary_search(k).is_err())
        .collect();
    t.sift_string_v = t.sift_positions_v.iter().map(|&k| t.alice_bits[k]).collect();

    if kind == ProtocolKind::P1Prime {
        match select_info_step7prime(&t.sift_string_v, n, params.epsilon, &mut rng.classical) {
            Ok(sel) => {
                t.substring_e = sel.e_indices;
                t.info_indices_q = sel.q;
                t.info_string_y = sel.y;
            }
            Err(reason) => return Status::Aborted(reason),
        }
    } else {
        if t.sift_string_v.len() < n {
            return Status::Aborted(AbortReason::InsufficientBalancedBits);
        }
        t.info_indices_q = (0..n).collect();
        t.info_string_y = t.sift_string_v[..n].to_vec();
    }
    Status::Completed
}
