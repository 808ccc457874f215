use serde::{Deserialize, Serialize};

use super::ProtocolKind;
use crate::error::{Error, Result};

/// Slack used when rounding derived sizes, so that e.g. `8·2·1.0625 = 17` is not lifted to 18
/// by representation error.
const ROUNDING_SLACK: f64 = 1e-9;

/// Order in which Eve's Protocol-2 unitaries are interleaved with Bob's actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// Everything forward, then everything back.
    #[default]
    Parallel,
    /// The `{U_k}` encoding, one step per qubit.
    Sequential,
}

/// How Bob's Protocol-2 measurement is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BobModel {
    /// Copy into a register qubit, measure the register at the end.
    #[default]
    Register,
    /// Measure in Z on arrival and resend the collapsed qubit.
    Immediate,
}

/// Protocol parameters. `N` and `h` are derived, not stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub n: usize,
    pub delta: f64,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub delta_prime: Option<f64>,
    #[serde(default)]
    pub p_ctrl_threshold: f64,
    #[serde(default)]
    pub p_test_threshold: f64,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default)]
    pub bob_model: BobModel,
    #[serde(default)]
    pub master_seed: u64,
}

impl ProtocolParams {
    pub fn new(n: usize, delta: f64) -> Self {
        Self {
            n,
            delta,
            epsilon: 0.0,
            delta_prime: None,
            p_ctrl_threshold: 0.0,
            p_test_threshold: 0.0,
            schedule: Schedule::Parallel,
            bob_model: BobModel::Register,
            master_seed: 0,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_delta_prime(mut self, delta_prime: f64) -> Self {
        self.delta_prime = Some(delta_prime);
        self
    }

    pub fn with_thresholds(mut self, p_ctrl: f64, p_test: f64) -> Self {
        self.p_ctrl_threshold = p_ctrl;
        self.p_test_threshold = p_test;
        self
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_bob_model(mut self, model: BobModel) -> Self {
        self.bob_model = model;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    /// `N = ⌈8n(1+δ)⌉`.
    pub fn num_qubits(&self) -> usize {
        num_qubits(self.n, self.delta)
    }

    /// `h = ⌊(1+ε)n/2⌋`.
    pub fn h(&self) -> usize {
        balanced_half(self.n, self.epsilon)
    }

    pub fn validate(&self, protocol: ProtocolKind) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n == 0 || self.n % 2 != 0 {
            return fail(format!("n must be a positive even integer, got {}", self.n));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return fail(format!("delta must be positive, got {}", self.delta));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return fail(format!("epsilon must lie in [0, 1], got {}", self.epsilon));
        }
        if protocol == ProtocolKind::P1Prime && self.epsilon >= self.delta {
            return fail(format!(
                "epsilon ({}) must be below delta ({})",
                self.epsilon, self.delta
            ));
        }
        if let Some(dp) = self.delta_prime {
            if !(self.epsilon < dp && dp < self.delta) {
                return fail(format!(
                    "delta_prime ({dp}) must lie strictly between epsilon ({}) and delta ({})",
                    self.epsilon, self.delta
                ));
            }
        }
        for (name, p) in [("p_ctrl", self.p_ctrl_threshold), ("p_test", self.p_test_threshold)] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} threshold must lie in [0, 1], got {p}"));
            }
        }
        Ok(())
    }
}

pub fn num_qubits(n: usize, delta: f64) -> usize {
    (8.0 * n as f64 * (1.0 + delta) - ROUNDING_SLACK).ceil() as usize
}

pub fn balanced_half(n: usize, epsilon: f64) -> usize {
    ((1.0 + epsilon) * n as f64 / 2.0 + ROUNDING_SLACK).floor() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_sizes() {
        assert_eq!(num_qubits(16, 0.5), 192);
        assert_eq!(num_qubits(2, 0.0625), 17);
        assert_eq!(num_qubits(4, 0.5), 48);
        assert_eq!(num_qubits(1, 0.01), 9);
        assert_eq!(balanced_half(4, 0.5), 3);
        assert_eq!(balanced_half(2, 1.0), 2);
        assert_eq!(balanced_half(16, 0.1), 8);
        assert_eq!(balanced_half(10, 0.1), 5);
    }

    #[test]
    fn validation() {
        let p = ProtocolParams::new(4, 0.5);
        assert!(p.validate(ProtocolKind::P1).is_ok());
        assert!(ProtocolParams::new(3, 0.5).validate(ProtocolKind::P1).is_err());
        assert!(ProtocolParams::new(4, 0.0).validate(ProtocolKind::P1).is_err());
        assert!(p.clone().with_epsilon(0.6).validate(ProtocolKind::P1Prime).is_err());
        assert!(p.clone().with_epsilon(0.6).validate(ProtocolKind::P1).is_ok());
        assert!(p.clone().with_epsilon(0.1).with_delta_prime(0.3).validate(ProtocolKind::P1Prime).is_ok());
        assert!(p.with_epsilon(0.1).with_delta_prime(0.05).validate(ProtocolKind::P1Prime).is_err());
    }
}
