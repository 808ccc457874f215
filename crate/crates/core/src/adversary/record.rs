use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::spec::Readout;
use crate::protocol::PublicView;

/// Eve's classical output for one run, formed after every public announcement.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EveRecord {
    /// Probe measurement results: one per slot for per-qubit attacks, one for a shared probe.
    pub probe_outcomes: Vec<usize>,
    /// Guesses `(position, bit)` at the announced SIFT positions.
    pub sift_guesses: Vec<(usize, u8)>,
    /// Guess of the INFO string, when the attack makes one and INFO was selected.
    pub info_guess: Option<Vec<u8>>,
    /// Discrete label of everything Eve learned, used for mutual-information estimates.
    pub observable: u64,
    pub metadata: BTreeMap<String, String>,
}

impl EveRecord {
    /// The single outcome of a shared probe.
    pub fn probe_outcome(&self) -> Option<usize> {
        match self.probe_outcomes.as_slice() {
            [one] => Some(*one),
            _ => None,
        }
    }
}

/// Turns raw probe outcomes into a record, using only announced data.
pub fn read_out(readout: Readout, probe_outcomes: Vec<usize>, view: &PublicView) -> EveRecord {
    let mut record = EveRecord {
        probe_outcomes,
        ..EveRecord::default()
    };
    match readout {
        Readout::Nothing => {}
        Readout::CopyPerQubit => {
            let bit = |k: usize| (record.probe_outcomes[k] & 1) as u8;
            record.sift_guesses = view.sift_positions().into_iter().map(|k| (k, bit(k))).collect();
            if !view.info_positions.is_empty() {
                let guess: Vec<u8> = view.info_positions.iter().map(|&k| bit(k)).collect();
                record.observable = pack_bits(&guess);
                record.info_guess = Some(guess);
            }
        }
        Readout::WeightCounter => {
            let claimed = record.probe_outcomes.first().copied().unwrap_or(0);
            let measured = view.num_qubits - view.reflect_order_s.len();
            let test_weight: usize = view.test_values_bob.iter().map(|&b| b as usize).sum();
            // weight and size of the measured bits Eve has not seen announced
            let hidden_weight = claimed as i64 - test_weight as i64;
            let hidden_size = measured as i64 - view.test_indices.len() as i64;
            let radix = view.num_qubits as u64 + 2;
            record.observable = (hidden_weight.rem_euclid(radix as i64) as u64) * radix
                + hidden_size.rem_euclid(radix as i64) as u64;
            record.metadata.insert("claimed_weight".into(), claimed.to_string());
            record.metadata.insert("measured".into(), measured.to_string());
            record.metadata.insert("test_weight".into(), test_weight.to_string());
        }
    }
    record
}

/// Packs a bit string (first bit most significant) into an integer label.
///
/// Strings longer than 64 bits are folded, which only coarsens the label.
pub fn pack_bits(bits: &[u8]) -> u64 {
    bits.iter()
        .fold(0u64, |acc, &b| acc.rotate_left(1) ^ u64::from(b & 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{BobAction, ProtocolKind};

    fn view() -> PublicView {
        PublicView {
            protocol: ProtocolKind::P1,
            num_qubits: 4,
            z_positions: vec![0, 1, 2],
            bob_actions: vec![BobAction::Sift, BobAction::Sift, BobAction::Sift, BobAction::Ctrl],
            reflect_order_s: vec![3],
            measured_set_m: vec![0, 1, 2],
            test_indices: vec![1],
            test_values_bob: vec![1],
            info_indices_q: vec![0],
            info_positions: vec![2],
            abort: None,
        }
    }

    #[test]
    fn copy_readout_guesses_at_sift_and_info_positions() {
        let r = read_out(Readout::CopyPerQubit, vec![1, 1, 0, 1], &view());
        assert_eq!(r.sift_guesses, vec![(0, 1), (1, 1), (2, 0)]);
        assert_eq!(r.info_guess, Some(vec![0]));
    }

    #[test]
    fn counter_readout_discounts_test_bits() {
        let r = read_out(Readout::WeightCounter, vec![2], &view());
        assert_eq!(r.probe_outcome(), Some(2));
        // hidden weight 1, hidden size 2, radix 6
        assert_eq!(r.observable, 6 + 2);
    }

    #[test]
    fn packing_is_injective_on_short_strings() {
        assert_eq!(pack_bits(&[1, 0, 1]), 5);
        assert_eq!(pack_bits(&[0, 1, 0, 1]), 5);
        assert_ne!(pack_bits(&[1, 0]), pack_bits(&[0, 1]));
    }
}
