use serde::{Deserialize, Serialize};

use crate::qstate::Basis;

/// Which protocol produced a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    Mock,
    P1,
    P1Prime,
    P2,
}

impl ProtocolKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Mock => "mock",
            Self::P1 => "p1",
            Self::P1Prime => "p1prime",
            Self::P2 => "p2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mock" => Some(Self::Mock),
            "p1" | "protocol1" => Some(Self::P1),
            "p1prime" | "p1'" | "protocol1prime" => Some(Self::P1Prime),
            "p2" | "protocol2" => Some(Self::P2),
            _ => None,
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Self::P1 | Self::P1Prime)
    }
}

impl std::fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Bob's per-qubit choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BobAction {
    Sift,
    Ctrl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AbortReason {
    CtrlErrorRate,
    TestErrorRate,
    InsufficientBalancedBits,
}

impl AbortReason {
    pub fn name(self) -> &'static str {
        match self {
            Self::CtrlErrorRate => "CtrlErrorRate",
            Self::TestErrorRate => "TestErrorRate",
            Self::InsufficientBalancedBits => "InsufficientBalancedBits",
        }
    }
}

/// Alice's check of one returned CTRL qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtrlResult {
    #[serde(with = "one_based_one")]
    pub position: usize,
    pub basis: Basis,
    pub sent: u8,
    pub received: u8,
}

impl CtrlResult {
    pub fn is_error(&self) -> bool {
        self.sent != self.received
    }
}

/// Everything that happened classically in one run, public and private.
///
/// Positions are zero-based in memory and one-based in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub protocol: ProtocolKind,
    pub num_qubits: usize,
    pub alice_bases: Vec<Basis>,
    pub alice_bits: Vec<u8>,
    pub bob_actions: Vec<BobAction>,
    /// Reflected positions in the order Bob sent them back (Protocol 1 family).
    #[serde(with = "one_based")]
    pub reflect_order_s: Vec<usize>,
    /// Positions Bob measured, ascending.
    #[serde(with = "one_based")]
    pub measured_set_m: Vec<usize>,
    /// Bob's results at `measured_set_m`.
    pub bob_measured_bits: Vec<u8>,
    pub ctrl_results: Vec<CtrlResult>,
    #[serde(with = "one_based")]
    pub test_indices: Vec<usize>,
    pub test_values_bob: Vec<u8>,
    /// Positions of the SIFT bits left after TEST, ascending.
    #[serde(with = "one_based")]
    pub sift_positions_v: Vec<usize>,
    /// Alice's values at `sift_positions_v`.
    pub sift_string_v: Vec<u8>,
    /// Indices into `v` of the balanced substring (Protocol 1′).
    #[serde(with = "one_based")]
    pub substring_e: Vec<usize>,
    /// Indices into `v` of the INFO bits.
    #[serde(with = "one_based")]
    pub info_indices_q: Vec<usize>,
    pub info_string_y: Vec<u8>,
    pub abort: Option<AbortReason>,
}

impl Transcript {
    pub fn new(protocol: ProtocolKind, num_qubits: usize) -> Self {
        Self {
            protocol,
            num_qubits,
            alice_bases: Vec::new(),
            alice_bits: Vec::new(),
            bob_actions: Vec::new(),
            reflect_order_s: Vec::new(),
            measured_set_m: Vec::new(),
            bob_measured_bits: Vec::new(),
            ctrl_results: Vec::new(),
            test_indices: Vec::new(),
            test_values_bob: Vec::new(),
            sift_positions_v: Vec::new(),
            sift_string_v: Vec::new(),
            substring_e: Vec::new(),
            info_indices_q: Vec::new(),
            info_string_y: Vec::new(),
            abort: None,
        }
    }

    /// Positions where Alice used Z and Bob chose SIFT, ascending.
    pub fn sift_positions(&self) -> Vec<usize> {
        (0..self.num_qubits)
            .filter(|&k| self.alice_bases[k] == Basis::Z && self.bob_actions[k] == BobAction::Sift)
            .collect()
    }

    /// Global positions of the INFO bits.
    pub fn info_positions(&self) -> Vec<usize> {
        self.info_indices_q
            .iter()
            .map(|&j| self.sift_positions_v[j])
            .collect()
    }

    /// Counts of (Z,SIFT), (X,SIFT), (Z,CTRL), (X,CTRL).
    pub fn category_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for (b, a) in self.alice_bases.iter().zip(&self.bob_actions) {
            let i = match (b, a) {
                (Basis::Z, BobAction::Sift) => 0,
                (Basis::X, BobAction::Sift) => 1,
                (Basis::Z, BobAction::Ctrl) => 2,
                (Basis::X, BobAction::Ctrl) => 3,
            };
            c[i] += 1;
        }
        c
    }

    /// The part of the record that was announced over the public channel.
    pub fn public_view(&self) -> PublicView {
        let info_positions = self.info_positions();
        PublicView {
            protocol: self.protocol,
            num_qubits: self.num_qubits,
            z_positions: (0..self.num_qubits)
                .filter(|&k| self.alice_bases[k] == Basis::Z)
                .collect(),
            bob_actions: self.bob_actions.clone(),
            reflect_order_s: self.reflect_order_s.clone(),
            measured_set_m: self.measured_set_m.clone(),
            test_indices: self.test_indices.clone(),
            test_values_bob: self.test_values_bob.clone(),
            info_indices_q: self.info_indices_q.clone(),
            info_positions,
            abort: self.abort,
        }
    }
}

/// Eve's view of a run: the transcript without any private bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicView {
    pub protocol: ProtocolKind,
    pub num_qubits: usize,
    pub z_positions: Vec<usize>,
    pub bob_actions: Vec<BobAction>,
    pub reflect_order_s: Vec<usize>,
    pub measured_set_m: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub test_values_bob: Vec<u8>,
    pub info_indices_q: Vec<usize>,
    pub info_positions: Vec<usize>,
    pub abort: Option<AbortReason>,
}

impl PublicView {
    /// Positions where Alice used Z and Bob chose SIFT.
    pub fn sift_positions(&self) -> Vec<usize> {
        self.z_positions
            .iter()
            .copied()
            .filter(|&k| self.bob_actions[k] == BobAction::Sift)
            .collect()
    }
}

mod one_based {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&k| k + 1))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        raw.into_iter()
            .map(|k| {
                k.checked_sub(1)
                    .ok_or_else(|| serde::de::Error::custom("positions are 1-based"))
            })
            .collect()
    }
}

mod one_based_one {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(k: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*k as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        usize::deserialize(d)?
            .checked_sub(1)
            .ok_or_else(|| serde::de::Error::custom("positions are 1-based"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_serialize_one_based() {
        let mut t = Transcript::new(ProtocolKind::P1, 2);
        t.alice_bases = vec![Basis::Z, Basis::X];
        t.alice_bits = vec![1, 0];
        t.bob_actions = vec![BobAction::Sift, BobAction::Ctrl];
        t.reflect_order_s = vec![1];
        t.measured_set_m = vec![0];
        t.ctrl_results = vec![CtrlResult {
            position: 1,
            basis: Basis::X,
            sent: 0,
            received: 0,
        }];
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["reflect_order_s"], serde_json::json!([2]));
        assert_eq!(json["measured_set_m"], serde_json::json!([1]));
        assert_eq!(json["ctrl_results"][0]["position"], 2);
        assert_eq!(json["bob_actions"], serde_json::json!(["SIFT", "CTRL"]));
        assert_eq!(json["protocol"], "p1");
        let back: Transcript = serde_json::from_value(json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn public_view_drops_private_bits() {
        let mut t = Transcript::new(ProtocolKind::P2, 3);
        t.alice_bases = vec![Basis::Z, Basis::X, Basis::Z];
        t.alice_bits = vec![1, 1, 0];
        t.bob_actions = vec![BobAction::Sift, BobAction::Sift, BobAction::Ctrl];
        let v = serde_json::to_value(t.public_view()).unwrap();
        assert!(v.get("alice_bits").is_none());
        assert_eq!(t.public_view().sift_positions(), vec![0]);
        assert_eq!(t.category_counts(), [1, 1, 1, 0]);
    }
}
